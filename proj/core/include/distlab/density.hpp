#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "distlab/fit.hpp"
#include "distlab/fractal.hpp"
#include "distlab/spectral_grid.hpp"

namespace distlab {

// M(t), nu^eps(t) and R^eps(t) = nu^eps(t) - M(t) on a t-grid.
struct DensityProfile {
  std::vector<double> t;
  std::vector<double> M;
  std::vector<double> tail_bound;
  std::vector<double> eps;
  std::vector<std::vector<double>> nu_eps;  // [eps index][t index]
  std::vector<std::vector<double>> R_eps;
  // Split of R^eps into |xi| < 1/eps and |xi| >= 1/eps.
  std::vector<std::vector<double>> R_low;
  std::vector<std::vector<double>> R_high;
  double diameter = 0.0;  // gauge diameter used to lay out the t-grid
};

struct DensityValue {
  double value = 0.0;
  double tail_bound = 0.0;
};

// Uniform t_i = i D / n, i = 1..n, with D the gauge diameter of the
// difference set's bounding box.
std::vector<double> default_t_grid(const IFSMeasure& measure, const ConvexBody& body, int n = 256);
double gauge_diameter(const IFSMeasure& measure, const ConvexBody& body);

// Tail estimate C t^((d-1)/2) sum_{j > J} E_j 2^(-j (d-1)/2) with the
// measured envelope constant and extrapolated shell energies E_j.
double density_tail_bound(const SpectralGrid& grid, double t);

// Throws DomainError for t <= 0 or t > grid.params.t_max.
DensityValue density_M(const SpectralGrid& grid, double t);
double nu_eps_fourier(const SpectralGrid& grid, double t, double eps);

// Everything on one t-grid; eps may be empty.
DensityProfile density_profile(const SpectralGrid& grid, const std::vector<double>& ts,
                               const std::vector<double>& eps = {});

// (nu([0, t + eps]) - nu([0, t - eps])) / (2 eps) from the grid, via the
// transform of the ball; round bodies only. This is the window average the
// pair-sampling estimator converges to.
double window_average_fourier(const SpectralGrid& grid, double t, double eps);

struct RemainderResult {
  RateFit fit;
  std::vector<double> eps;
  std::vector<double> sup_R;     // sup over the t list of |R^eps_grid|
  std::vector<double> sup_low;   // part from |xi| < 1/eps
  std::vector<double> sup_high;  // part from |xi| >= 1/eps
  double tail = 0.0;             // sup_t of the truncation tail, not part of the fit
  double sandwich_ratio = 0.0;   // max_eps sup_R / (constant eps^exponent)
  bool hypothesis_met = true;
  bool fit_ok = true;
  std::string note;
  bool pass = false;
};

RemainderResult remainder_rate(const SpectralGrid& grid, const std::vector<double>& ts, const std::vector<double>& eps,
                               double tolerance = 0.1);

struct EnergyResult {
  RateFit fit;
  std::vector<int> shells;
  std::vector<double> energies;
  bool fit_ok = true;
  std::string note;
  bool pass = false;
};

// Shells j_lo..j_hi (j_hi < 0 means the top shell); energies at or below
// noise_floor times the shell volume are dropped before fitting.
EnergyResult dyadic_energy(const SpectralGrid& grid, int j_lo = 2, int j_hi = -1, double tolerance = 0.1,
                           double noise_floor = 1e-14);

// Both sides of the Riesz identity for a standard Gaussian in R^d; their
// ratio is the constant the identity is checked against.
struct GaussianCalibration {
  double fourier_side = 0.0;
  double space_side = 0.0;
  double constant = 0.0;
};
GaussianCalibration gaussian_calibration(int d, double gamma);

struct EnergyIdentity {
  double gamma = 0.0;
  double fourier_side = 0.0;  // grid part + low cell + extrapolated tail
  double fourier_tail = 0.0;
  double space_side = 0.0;
  double space_stderr = 0.0;
  double ratio = 0.0;
  double calibrated_constant = 0.0;
  double relative_error = 0.0;  // |ratio / constant - 1|
  double max_term_share = 0.0;  // largest pair term over the pair sum
  std::size_t rejected_pairs = 0;
  bool converged = true;
  std::string note;
  bool pass = false;
};

EnergyIdentity energy_integral_identity(const SpectralGrid& grid, const IFSMeasure& measure, double gamma,
                                        std::size_t n_pairs, std::uint64_t seed, double tolerance = 0.05);

struct DerivativeResult {
  int order = 1;
  double value = 0.0;
  double tail_bound = 0.0;  // infinite when the frequency tail diverges
  bool warning = false;     // s <= (d+1)/2 + m
  std::string note;
};

// d^m/dt^m M(t) under the integral sign, m in 1..3; round bodies only.
DerivativeResult density_derivative(const SpectralGrid& grid, double t, int m);

// Largest m with s > (d+1)/2 + m, or -1 when M is not known to exist.
int smoothness_order(double s, int d);

struct HolderResult {
  double alpha = 0.0;
  std::vector<double> separations;
  std::vector<double> octave_max;      // max quotient at each separation
  std::vector<double> cumulative_max;  // max over separations >= this one
  double max_quotient = 0.0;
  double growth = 0.0;  // cumulative max at the finest separation / at the coarsest
  bool hypothesis_met = true;
  bool pass = false;
};

// max |M(u) - M(v)| / |u - v|^alpha over the given pairs; u == v skipped.
double holder_quotient(const SpectralGrid& grid, const std::vector<std::pair<double, double>>& pairs, double alpha);

// Separations h, 2h, ..., 2^octaves h with h the profile's t spacing, pairs
// restricted to t indices [first, last].
HolderResult holder_certificate(const DensityProfile& profile, double alpha, double s, int d, std::size_t first,
                                std::size_t last, int octaves = 4, double growth_limit = 2.0);

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

// Maximal runs of at least two consecutive t-grid points with M - tail > c.
std::vector<Interval> interval_certificate(const DensityProfile& profile, double c);

struct MassCheck {
  double mass = 0.0;
  double tail_integral = 0.0;
  double quadrature_error = 0.0;  // trapezoid against Simpson on the same grid
  double tolerance = 0.0;
  double min_M = 0.0;
  bool pass = false;
};

// Trapezoid integral of M over [0, t_last] with M(0) = 0.
MassCheck mass_check(const DensityProfile& profile, double cap = 0.02);

}  // namespace distlab
