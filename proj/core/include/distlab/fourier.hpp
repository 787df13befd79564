#pragma once

#include <vector>

#include "distlab/fit.hpp"
#include "distlab/geometry.hpp"

namespace distlab {

// surface: the boundary surface measure sigma.
// coarea:  r(omega)^d d omega, i.e. d/dt of Lebesgue measure on tB at t = 1.
// The two agree for Euclidean balls of radius 1; the coarea measure is the
// one whose transform gives the density of gauge distances.
enum class BoundaryWeight { surface, coarea };

// Boundary quadrature at a fixed level, held in structure-of-arrays form.
// d = 3 rules are generated ring by ring on the fly above a size cap.
class BoundaryRule {
 public:
  BoundaryRule(const ConvexBody& body, int level);

  const ConvexBody& body() const { return body_; }
  int level() const { return level_; }
  double spacing() const { return spacing_; }
  // Largest |xi| honouring the (10 |xi|)^-1 arc-length spacing rule.
  double max_frequency() const { return 0.1 / spacing_; }
  std::size_t size() const;  // nodes of the full rule

  // sum_i w_i exp(-2 pi i x_i . xi); throws ResolutionError beyond max_frequency().
  cdouble transform(const Vec& xi, BoundaryWeight weight = BoundaryWeight::surface) const;

  // One pass over the nodes for several frequencies.
  std::vector<cdouble> transform_batch(const std::vector<Vec>& xi,
                                       BoundaryWeight weight = BoundaryWeight::surface) const;

  // d^m/dt^m [ t^(d-1) transform(t xi) ], m in 0..3.
  cdouble scaled_jet(const Vec& xi, double t, int m, BoundaryWeight weight = BoundaryWeight::surface) const;
  // All orders 0..3 for each xi at once.
  std::vector<std::array<cdouble, 4>> scaled_jet_batch(const std::vector<Vec>& xi, double t,
                                                       BoundaryWeight weight = BoundaryWeight::surface) const;

  // transform(k du eta) for k = 0..count-1 along the unit direction eta.
  std::vector<cdouble> profile(const Vec& eta, double du, std::size_t count,
                               BoundaryWeight weight = BoundaryWeight::surface) const;

 private:
  void check_frequency(double f) const;
  template <class F>
  void for_each_block(F&& f) const;
  std::size_t block_count() const;

  ConvexBody body_;
  int level_;
  double spacing_;
  bool stored_ = false;
  // Centrally symmetric body: keep one node of each antipodal pair with
  // twice the weight; the transform is then 2 sum w cos, a real number.
  bool half_ = false;
  std::vector<double> x_[3];
  std::vector<double> w_;
  std::vector<double> wc_;
};

// Smallest level >= start whose rule resolves |xi| = freq; escalates up to
// max_level and throws ResolutionError past it.
int resolving_level(const ConvexBody& body, double freq, int start_level = 1, int max_level = -1);
int max_boundary_level(int d);

cdouble sigma_hat(const ConvexBody& body, const Vec& xi, int level,
                  BoundaryWeight weight = BoundaryWeight::surface);

// Exact transforms for the Euclidean ball of radius a:
//   d = 2: a * 2 pi J0(2 pi a u),  d = 3: a^2 * 2 sin(2 pi a u) / (a u)
// times a for the coarea weight. Used by grids over round bodies.
double round_sigma_hat(int d, double a, double u, BoundaryWeight weight);
// d^k/du^k of round_sigma_hat, k in 0..3.
double round_sigma_hat_derivative(int d, double a, double u, int k, BoundaryWeight weight);

struct DecayOptions {
  int window_samples = 9;  // radii per R spread over half an oscillation
  double tolerance = 0.1;
  bool two_sided = false;  // |fit - predicted| <= tol instead of fit <= predicted + tol
  BoundaryWeight weight = BoundaryWeight::surface;
};

struct DecayCertificate {
  RateFit fit;
  std::vector<double> radii;
  std::vector<double> envelope;  // D(R)
  double envelope_constant = 0.0;  // max_R D(R) R^((d-1)/2)
  std::vector<int> levels;
};

// Evenly spread unit directions over a half circle / hemisphere.
std::vector<Vec> default_directions(int d, int count);

DecayCertificate decay_certificate(const ConvexBody& body, const std::vector<double>& radii,
                                   const std::vector<Vec>& directions, const DecayOptions& opt = {});

// Envelope of the scaled jet: max over directions and window of
// |d^m/dt^m (t^(d-1) sigma_hat(t xi))| at t = 1 against |xi| = R.
struct JetEnvelope {
  RateFit fit;
  std::vector<double> radii;
  std::vector<double> normalised;  // max |jet| * R^((d-1)/2 - m)
  double spread = 0.0;             // max / min of `normalised`
  bool pass = false;
};

JetEnvelope jet_envelope(const ConvexBody& body, const std::vector<double>& radii,
                         const std::vector<Vec>& directions, int m, double spread_limit = 2.0,
                         double tolerance = 0.1);

// Gaussian mollifier: rho^(u) = exp(-pi |u|^2), evaluated at u = eps * xi.
double mollifier_hat(double eps, double xi_norm);
double mollifier_hat(double eps, const Vec& xi, int d);

}  // namespace distlab
