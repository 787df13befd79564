#pragma once

#include <string>
#include <vector>

#include "distlab/fourier.hpp"
#include "distlab/fractal.hpp"

namespace distlab {

struct GridParams {
  int j_min = 0;
  int j_max = 11;
  // Angular oversampling: node counts are angular_level / 8 times the
  // bandwidth of the integrand on the sphere of radius rho, plus a margin.
  int angular_level = 10;
  // Minimum Gauss-Legendre nodes per dyadic shell; shells are refined further
  // so every panel resolves the radial oscillation of the integrand.
  int radial_nodes = 16;
  // Largest t at which M(t) will be evaluated; sets the radial bandwidth.
  double t_max = 1.5;
  BoundaryWeight weight = BoundaryWeight::coarea;
};

// One dyadic shell 2^j <= |xi| <= 2^(j+1); j = -1 is the low cell [0, 1].
struct GridShell {
  int j = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t begin = 0;  // radial node range
  std::size_t end = 0;
  double volume = 0.0;  // quadrature of 1 over the shell
  double energy = 0.0;  // quadrature of |mu^|^2 over the shell
  // Non-round bodies only: folded direction set, with |mu^|^2 per
  // (radial node, direction) row-major, and Re sigma^(u omega_i) sampled at
  // u = k * profile_du.
  std::vector<Vec> directions;
  std::vector<double> direction_weights;
  std::vector<double> mu_sq;
  std::vector<std::vector<double>> profiles;
  int boundary_level = 0;
};

struct SpectralGrid {
  int dimension = 2;
  GridParams params;
  std::string measure_label;
  std::string body_label;
  std::string convention = kFourierConvention;
  double similarity_dim = 0.0;

  // Round bodies: sigma^ is the closed-form radial profile of the ball.
  bool round = false;
  double round_radius = 1.0;
  int fold = 1;  // order of the symmetry group used to fold node sets
  bool cylindrical = false;

  // Radial nodes over all shells, increasing. radial_w includes rho^(d-1).
  std::vector<double> rho;
  std::vector<double> radial_w;
  std::vector<double> angular_mass;  // int_{S^(d-1)} |mu^(rho omega)|^2 d omega
  std::vector<GridShell> shells;     // shells[0] is the low cell
  double low_cutoff = 0.0;           // radial rule starts here; below it the integrand is taken analytic
  double profile_du = 0.0;

  // Decay envelope |sigma^(xi)| <= C |xi|^(-(d-1)/2) used by the tail bounds.
  double envelope_constant = 0.0;
  // Fitted growth of the shell energies, E_j ~ 2^(j beta).
  RateFit energy_fit;
  // |round closed form - boundary quadrature| at the check frequencies.
  double round_check_error = 0.0;
  std::size_t node_count = 0;  // folded (radial x angular) nodes evaluated

  int j_max() const { return params.j_max; }
  double max_frequency() const { return rho.empty() ? 0.0 : shells.back().hi; }
  const GridShell& shell(int j) const;
  // sum of E_j over j > j_max extrapolated with energy_fit and weighted by
  // 2^(-j p); infinite when the geometric ratio is >= 1.
  double tail_sum(double p) const;
};

// Radius of the smallest ball about 0 containing the difference set, in the
// Euclidean norm; bounds the spatial extent of |mu^|^2.
double difference_radius(const IFSMeasure& m);

// Order of the symmetry group (2, 4, 8 in d = 2; 2, 8, 16 in d = 3) shared by
// |mu^|^2 and the body; detected numerically.
int symmetry_order(const IFSMeasure& m, const ConvexBody& body);

SpectralGrid build_spectral_grid(const IFSMeasure& measure, const ConvexBody& body, const GridParams& params);

// Integral of the constant 1 over the grid against the exact ball volumes.
double shell_volume_error(const SpectralGrid& grid);

// Text cache with a header of every parameter and the Fourier convention.
// load_grid throws DomainError when the header does not match `expect`
// (measure label, body label, params) or the format version differs.
void save_grid(const SpectralGrid& grid, const std::string& path);
SpectralGrid load_grid(const std::string& path);
bool grid_matches(const SpectralGrid& grid, const IFSMeasure& measure, const ConvexBody& body, const GridParams& params);

}  // namespace distlab
