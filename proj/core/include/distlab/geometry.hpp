#pragma once

#include <string>
#include <vector>

#include "distlab/types.hpp"

namespace distlab {

enum class BodyKind { convex_curved, star_shaped };

enum class BodyShape { ball, ellipsoid, perturbed_ball, star, flattened_disk };

// Radial function with its first two angular derivatives (d = 2, angle theta).
struct PolarJet {
  double r = 0.0;
  double dr = 0.0;
  double d2r = 0.0;
};

// Gauge G(x) = |x| / r(x/|x|) with gradient and Hessian at x.
struct GaugeJet {
  double value = 0.0;
  Vec grad{};
  std::array<Vec, 3> hess{};
};

// Symmetric body described by its radial function r(omega): the boundary
// point in direction omega is r(omega) * omega.
//
//   ball            params = {radius}
//   ellipsoid       params = semi-axes (d of them)
//   perturbed_ball  params = {delta, k}; r = 1 + delta*cos(k theta) in d = 2,
//                   r = 1 + delta*(x^4 + y^4 + z^4 - 3/5) in d = 3 (k ignored)
//   star            params = {base, delta, k}; same profiles around `base`,
//                   kind star_shaped, must satisfy 1 < r < 2
//   flattened_disk  params = {half_angle}; unit disk cut by the chords
//                   x = +-cos(half_angle), d = 2 only
class ConvexBody {
 public:
  static ConvexBody ball(int d, double radius = 1.0);
  static ConvexBody ellipsoid(std::vector<double> semi_axes);
  static ConvexBody perturbed_ball(int d, double delta, int k = 4);
  static ConvexBody star(int d, double base, double delta, int k = 4);
  static ConvexBody flattened_disk(double half_angle);
  static ConvexBody from_spec(const std::string& kind, int d, const std::vector<double>& params);

  int dimension() const { return d_; }
  BodyKind kind() const { return kind_; }
  BodyShape shape() const { return shape_; }
  bool symmetric() const { return symmetric_; }
  const std::vector<double>& params() const { return params_; }
  double scale() const { return scale_; }

  // lambda * B
  ConvexBody dilated(double lambda) const;

  // Euclidean ball (possibly dilated); the transform of its boundary measure is radial.
  bool round() const { return shape_ == BodyShape::ball; }
  double round_radius() const;

  double radial(const Vec& omega) const;
  double radial_angle(double theta) const;

  // Analytic where the shape allows it, central differences otherwise.
  PolarJet polar_jet(double theta) const;
  PolarJet polar_jet_fd(double theta, double h) const;
  GaugeJet gauge_jet(const Vec& x) const;
  GaugeJet gauge_jet_fd(const Vec& x, double h) const;
  // Gradient only; analytic for every shape except the flattened disk.
  Vec gauge_grad(const Vec& x) const;
  bool analytic_derivatives() const;

  // Bounds sampled on a fixed direction grid at construction.
  double r_min() const { return r_min_; }
  double r_max() const { return r_max_; }
  // Max of |d(r(omega) omega)/d omega|, the arc-length stretch of the parameterisation.
  double stretch_max() const { return stretch_max_; }

  std::string describe() const;

 private:
  ConvexBody() = default;
  void finalize();
  double base_radial(const Vec& omega) const;

  int d_ = 2;
  BodyShape shape_ = BodyShape::ball;
  BodyKind kind_ = BodyKind::convex_curved;
  bool symmetric_ = true;
  std::vector<double> params_;
  double scale_ = 1.0;
  double r_min_ = 0.0;
  double r_max_ = 0.0;
  double stretch_max_ = 0.0;
};

double gauge_norm(const ConvexBody& body, const Vec& x);

struct BoundaryNode {
  Vec x{};
  double w = 0.0;         // surface measure weight
  double w_coarea = 0.0;  // r(omega)^d d omega, see fourier.hpp
};

// d = 2: 2^(level+5) equispaced midpoint angles.
// d = 3: 2^(level+3) Gauss-Legendre nodes in cos(polar angle) times twice as
// many midpoint longitudes.
std::vector<BoundaryNode> boundary_quadrature(const ConvexBody& body, int level);

// d = 3 only: the rule one latitude ring at a time.
int boundary_rings(const ConvexBody& body, int level);
void boundary_ring(const ConvexBody& body, int level, int ring, std::vector<BoundaryNode>& out);

// Largest arc-length gap between neighbouring nodes of the level's rule.
double boundary_spacing(const ConvexBody& body, int level);

// Surface measure of the boundary by an adaptive arc-length integral (d = 2)
// or a high-order product rule (d = 3); independent of boundary_quadrature.
double adaptive_perimeter(const ConvexBody& body, double tol = 1e-12);

// The certification grid has 2^(grid_level+6) samples along one angle.
struct CurvatureCertificate {
  double min_curvature = 0.0;
  Vec location{};          // direction omega achieving the minimum
  bool pass = false;       // min_curvature > curvature_floor
  bool finite_difference = false;
  double richardson_gap = 0.0;  // |K_h - K_{h/2}| at the minimiser, FD path only
  std::string message;
};

inline constexpr double kCurvatureFloor = 1e-6;

double gaussian_curvature(const ConvexBody& body, const Vec& omega);
CurvatureCertificate curvature_certificate(const ConvexBody& body, int grid_level);

// d = 2: outer unit normals where the curvature changes sign, located by
// bisection between samples of the certificate grid. sigma_hat decays
// slowest along them. Empty in d = 3 and when the curvature keeps its sign.
std::vector<Vec> inflection_normals(const ConvexBody& body, int grid_level);

}  // namespace distlab
