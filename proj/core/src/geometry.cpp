#include "distlab/geometry.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <sstream>

#include "distlab/quadrature.hpp"

namespace distlab {

namespace {

constexpr double kFdStep = 1e-4;

double det3(const std::array<Vec, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Bordered-Hessian determinant [[H, g], [g^T, 0]] for d = 3.
double bordered_det(const GaugeJet& j) {
  double m[4][4];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) m[a][b] = j.hess[a][b];
    m[a][3] = j.grad[a];
    m[3][a] = j.grad[a];
  }
  m[3][3] = 0.0;
  // Laplace expansion along the last row.
  double det = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::array<Vec, 3> minor{};
    for (int r = 0; r < 3; ++r) {
      int cc = 0;
      for (int k = 0; k < 4; ++k) {
        if (k == c) continue;
        minor[r][cc++] = m[r][k];
      }
    }
    double sign = ((3 + c) % 2 == 0) ? 1.0 : -1.0;
    det += sign * m[3][c] * det3(minor);
  }
  return det;
}

Vec direction_from_angles(double z, double lambda) {
  double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(lambda), s * std::sin(lambda), z};
}

double curvature_from_polar(const PolarJet& p) {
  double num = p.r * p.r + 2.0 * p.dr * p.dr - p.r * p.d2r;
  double den = std::pow(p.r * p.r + p.dr * p.dr, 1.5);
  return num / den;
}

double curvature_from_gauge(const GaugeJet& j) {
  double g2 = dot(j.grad, j.grad, 3);
  return -bordered_det(j) / (g2 * g2);
}

}  // namespace

ConvexBody ConvexBody::ball(int d, double radius) {
  if (d != 2 && d != 3) throw DomainError("ball: dimension must be 2 or 3");
  if (!(radius > 0.0)) throw DomainError("ball: radius must be positive");
  ConvexBody b;
  b.d_ = d;
  b.shape_ = BodyShape::ball;
  b.params_ = {radius};
  b.finalize();
  return b;
}

ConvexBody ConvexBody::ellipsoid(std::vector<double> semi_axes) {
  int d = static_cast<int>(semi_axes.size());
  if (d != 2 && d != 3) throw DomainError("ellipsoid: need 2 or 3 semi-axes");
  for (double a : semi_axes)
    if (!(a > 0.0)) throw DomainError("ellipsoid: semi-axes must be positive");
  ConvexBody b;
  b.d_ = d;
  b.shape_ = BodyShape::ellipsoid;
  b.params_ = std::move(semi_axes);
  b.finalize();
  return b;
}

ConvexBody ConvexBody::perturbed_ball(int d, double delta, int k) {
  if (d != 2 && d != 3) throw DomainError("perturbed_ball: dimension must be 2 or 3");
  if (d == 2 && k % 2 != 0) throw DomainError("perturbed_ball: k must be even for a symmetric body");
  if (!(std::abs(delta) < 0.5)) throw DomainError("perturbed_ball: |delta| must be below 0.5");
  ConvexBody b;
  b.d_ = d;
  b.shape_ = BodyShape::perturbed_ball;
  b.params_ = {delta, static_cast<double>(k)};
  b.finalize();
  return b;
}

ConvexBody ConvexBody::star(int d, double base, double delta, int k) {
  if (d != 2 && d != 3) throw DomainError("star: dimension must be 2 or 3");
  if (d == 2 && k % 2 != 0) throw DomainError("star: k must be even for a symmetric body");
  ConvexBody b;
  b.d_ = d;
  b.shape_ = BodyShape::star;
  b.kind_ = BodyKind::star_shaped;
  b.params_ = {base, delta, static_cast<double>(k)};
  b.finalize();
  return b;
}

ConvexBody ConvexBody::flattened_disk(double half_angle) {
  if (!(half_angle > 0.0 && half_angle < kPi / 4))
    throw DomainError("flattened_disk: half angle must lie in (0, pi/4)");
  ConvexBody b;
  b.d_ = 2;
  b.shape_ = BodyShape::flattened_disk;
  b.params_ = {half_angle};
  b.finalize();
  return b;
}

ConvexBody ConvexBody::from_spec(const std::string& kind, int d, const std::vector<double>& p) {
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw DomainError("body " + kind + ": expected " + std::to_string(n) + " params, got " +
                        std::to_string(p.size()));
  };
  if (kind == "ball") {
    if (p.empty()) return ball(d);
    need(1);
    return ball(d, p[0]);
  }
  if (kind == "ellipsoid") {
    if (static_cast<int>(p.size()) != d) throw DomainError("ellipsoid: params must hold d semi-axes");
    return ellipsoid(p);
  }
  if (kind == "perturbed_ball") {
    if (p.size() == 1) return perturbed_ball(d, p[0]);
    need(2);
    return perturbed_ball(d, p[0], static_cast<int>(p[1]));
  }
  if (kind == "star") {
    if (p.size() == 2) return star(d, p[0], p[1]);
    need(3);
    return star(d, p[0], p[1], static_cast<int>(p[2]));
  }
  if (kind == "flattened_disk") {
    if (d != 2) throw DomainError("flattened_disk is two-dimensional");
    need(1);
    return flattened_disk(p[0]);
  }
  throw DomainError("unknown body kind '" + kind + "'");
}

ConvexBody ConvexBody::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw DomainError("dilated: factor must be positive");
  ConvexBody b = *this;
  b.scale_ *= lambda;
  b.finalize();
  return b;
}

double ConvexBody::round_radius() const {
  if (!round()) throw DomainError("round_radius: body is not a Euclidean ball");
  return scale_ * params_[0];
}

double ConvexBody::base_radial(const Vec& w) const {
  switch (shape_) {
    case BodyShape::ball:
      return params_[0];
    case BodyShape::ellipsoid: {
      double q = 0.0;
      for (int i = 0; i < d_; ++i) q += w[i] * w[i] / (params_[i] * params_[i]);
      return 1.0 / std::sqrt(q);
    }
    case BodyShape::perturbed_ball:
    case BodyShape::star: {
      bool star = shape_ == BodyShape::star;
      double base = star ? params_[0] : 1.0;
      double delta = star ? params_[1] : params_[0];
      double k = star ? params_[2] : params_[1];
      if (d_ == 2) return base + delta * std::cos(k * std::atan2(w[1], w[0]));
      double q = w[0] * w[0] * w[0] * w[0] + w[1] * w[1] * w[1] * w[1] + w[2] * w[2] * w[2] * w[2];
      return base + delta * (q - 0.6);
    }
    case BodyShape::flattened_disk: {
      double c = std::cos(params_[0]);
      double ax = std::abs(w[0]);
      return ax > c ? c / ax : 1.0;
    }
  }
  return 1.0;
}

double ConvexBody::radial(const Vec& omega) const { return scale_ * base_radial(omega); }

double ConvexBody::radial_angle(double theta) const {
  return radial({std::cos(theta), std::sin(theta), 0.0});
}

bool ConvexBody::analytic_derivatives() const {
  if (shape_ == BodyShape::ball || shape_ == BodyShape::ellipsoid) return true;
  if (d_ == 2 && (shape_ == BodyShape::perturbed_ball || shape_ == BodyShape::star)) return true;
  return false;
}

PolarJet ConvexBody::polar_jet_fd(double theta, double h) const {
  double rp = radial_angle(theta + h);
  double r0 = radial_angle(theta);
  double rm = radial_angle(theta - h);
  return {r0, (rp - rm) / (2.0 * h), (rp - 2.0 * r0 + rm) / (h * h)};
}

PolarJet ConvexBody::polar_jet(double theta) const {
  if (d_ != 2) throw DomainError("polar_jet: two-dimensional bodies only");
  switch (shape_) {
    case BodyShape::ball:
      return {scale_ * params_[0], 0.0, 0.0};
    case BodyShape::ellipsoid: {
      double a2 = params_[0] * params_[0], b2 = params_[1] * params_[1];
      double c = std::cos(theta), s = std::sin(theta);
      double q = c * c / a2 + s * s / b2;
      double dq = std::sin(2.0 * theta) * (1.0 / b2 - 1.0 / a2);
      double d2q = 2.0 * std::cos(2.0 * theta) * (1.0 / b2 - 1.0 / a2);
      double r = 1.0 / std::sqrt(q);
      double dr = -0.5 * r * r * r * dq;
      double d2r = 0.75 * std::pow(q, -2.5) * dq * dq - 0.5 * r * r * r * d2q;
      return {scale_ * r, scale_ * dr, scale_ * d2r};
    }
    case BodyShape::perturbed_ball:
    case BodyShape::star: {
      bool star = shape_ == BodyShape::star;
      double base = star ? params_[0] : 1.0;
      double delta = star ? params_[1] : params_[0];
      double k = star ? params_[2] : params_[1];
      double r = base + delta * std::cos(k * theta);
      double dr = -delta * k * std::sin(k * theta);
      double d2r = -delta * k * k * std::cos(k * theta);
      return {scale_ * r, scale_ * dr, scale_ * d2r};
    }
    case BodyShape::flattened_disk:
      break;
  }
  return polar_jet_fd(theta, kFdStep);
}

GaugeJet ConvexBody::gauge_jet_fd(const Vec& x, double h) const {
  GaugeJet j;
  j.value = gauge_norm(*this, x);
  Vec xp = x, xm = x;
  double gp[3], gm[3];
  for (int i = 0; i < d_; ++i) {
    xp = x;
    xm = x;
    xp[i] += h;
    xm[i] -= h;
    gp[i] = gauge_norm(*this, xp);
    gm[i] = gauge_norm(*this, xm);
    j.grad[i] = (gp[i] - gm[i]) / (2.0 * h);
    j.hess[i][i] = (gp[i] - 2.0 * j.value + gm[i]) / (h * h);
  }
  for (int a = 0; a < d_; ++a) {
    for (int b = a + 1; b < d_; ++b) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp[a] += h, pp[b] += h;
      pm[a] += h, pm[b] -= h;
      mp[a] -= h, mp[b] += h;
      mm[a] -= h, mm[b] -= h;
      double v = (gauge_norm(*this, pp) - gauge_norm(*this, pm) - gauge_norm(*this, mp) +
                  gauge_norm(*this, mm)) /
                 (4.0 * h * h);
      j.hess[a][b] = v;
      j.hess[b][a] = v;
    }
  }
  return j;
}

GaugeJet ConvexBody::gauge_jet(const Vec& x) const {
  if (shape_ == BodyShape::ball || shape_ == BodyShape::ellipsoid) {
    double inv2[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < d_; ++i) {
      double a = scale_ * (shape_ == BodyShape::ball ? params_[0] : params_[i]);
      inv2[i] = 1.0 / (a * a);
    }
    GaugeJet j;
    double q = 0.0;
    for (int i = 0; i < d_; ++i) q += x[i] * x[i] * inv2[i];
    j.value = std::sqrt(q);
    if (j.value == 0.0) return j;
    for (int i = 0; i < d_; ++i) j.grad[i] = x[i] * inv2[i] / j.value;
    for (int a = 0; a < d_; ++a)
      for (int b = 0; b < d_; ++b)
        j.hess[a][b] = ((a == b) ? inv2[a] : 0.0) / j.value - j.grad[a] * j.grad[b] / j.value;
    return j;
  }
  return gauge_jet_fd(x, kFdStep * std::max(1.0, norm(x, d_)));
}

Vec ConvexBody::gauge_grad(const Vec& x) const {
  if (shape_ == BodyShape::ball || shape_ == BodyShape::ellipsoid) {
    Vec g{};
    double q = 0.0;
    for (int i = 0; i < d_; ++i) {
      double a = scale_ * (shape_ == BodyShape::ball ? params_[0] : params_[i]);
      g[i] = x[i] / (a * a);
      q += x[i] * g[i];
    }
    return q > 0.0 ? scaled(g, 1.0 / std::sqrt(q)) : Vec{};
  }
  double rho = norm(x, d_);
  if (rho == 0.0) return {};
  Vec w = scaled(x, 1.0 / rho);
  if (d_ == 2) {
    if (shape_ == BodyShape::flattened_disk) return gauge_jet(x).grad;
    PolarJet p = polar_jet(std::atan2(w[1], w[0]));
    // grad G = omega / r - (r' / r^2) omega_perp
    double k = p.dr / (p.r * p.r);
    return {w[0] / p.r + k * w[1], w[1] / p.r - k * w[0], 0.0};
  }
  bool star = shape_ == BodyShape::star;
  double delta = scale_ * (star ? params_[1] : params_[0]);
  double r = radial(w);
  // extension r(y) = base + delta (sum y_i^4 - 3/5); tangential part of its gradient
  Vec g = {4.0 * delta * w[0] * w[0] * w[0], 4.0 * delta * w[1] * w[1] * w[1],
           4.0 * delta * w[2] * w[2] * w[2]};
  double gw = dot(g, w, 3);
  Vec out;
  for (int i = 0; i < 3; ++i) out[i] = w[i] / r - (g[i] - gw * w[i]) / (r * r);
  return out;
}

void ConvexBody::finalize() {
  r_min_ = 1e300;
  r_max_ = 0.0;
  stretch_max_ = 0.0;
  auto visit = [&](const Vec& w, double stretch) {
    double r = radial(w);
    if (!std::isfinite(r) || !(r > 0.0)) throw DomainError("body: radial function must be positive");
    if (kind_ == BodyKind::star_shaped && !(scale_ * 1.0 < r && r < scale_ * 2.0))
      throw DomainError("star body: radial function must satisfy 1 < r < 2");
    Vec mw = {-w[0], -w[1], -w[2]};
    if (std::abs(radial(mw) - r) > 1e-12 * r) symmetric_ = false;
    if (!std::isfinite(stretch)) throw DomainError("body: non-finite derivative estimate");
    r_min_ = std::min(r_min_, r);
    r_max_ = std::max(r_max_, r);
    stretch_max_ = std::max(stretch_max_, stretch);
  };
  symmetric_ = true;
  if (d_ == 2) {
    const int n = 2048;
    for (int i = 0; i < n; ++i) {
      double th = kTwoPi * (i + 0.5) / n;
      PolarJet p = polar_jet(th);
      visit({std::cos(th), std::sin(th), 0.0}, std::hypot(p.r, p.dr));
    }
  } else {
    const int nz = 48, nl = 96;
    for (int a = 0; a < nz; ++a) {
      double z = std::cos(kPi * (a + 0.5) / nz);
      for (int b = 0; b < nl; ++b) {
        Vec w = direction_from_angles(z, kTwoPi * (b + 0.5) / nl);
        double r = radial(w);
        visit(w, r * r * norm(gauge_grad(scaled(w, r)), 3));
      }
    }
  }
  // Margin for the unsampled directions between grid points.
  stretch_max_ *= 1.05;
  if (kind_ == BodyKind::star_shaped && !symmetric_)
    throw DomainError("star body: radial function must be symmetric");
}

std::string ConvexBody::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (shape_) {
    case BodyShape::ball: os << "ball"; break;
    case BodyShape::ellipsoid: os << "ellipsoid"; break;
    case BodyShape::perturbed_ball: os << "perturbed_ball"; break;
    case BodyShape::star: os << "star"; break;
    case BodyShape::flattened_disk: os << "flattened_disk"; break;
  }
  os << "(d=" << d_;
  for (double p : params_) os << "," << p;
  if (scale_ != 1.0) os << ";scale=" << scale_;
  os << ")";
  return os.str();
}

double gauge_norm(const ConvexBody& body, const Vec& x) {
  int d = body.dimension();
  double n = norm(x, d);
  if (n == 0.0) return 0.0;
  Vec w = scaled(x, 1.0 / n);
  return n / body.radial(w);
}

std::vector<BoundaryNode> boundary_quadrature(const ConvexBody& body, int level) {
  if (level < 1) throw DomainError("boundary_quadrature: level must be >= 1");
  std::vector<BoundaryNode> out;
  auto check = [&](double v) {
    if (!std::isfinite(v))
      throw DomainError("boundary_quadrature: radial function not smooth at this resolution");
  };
  if (body.dimension() == 2) {
    const long n = 1L << (level + 5);
    const double dth = kTwoPi / static_cast<double>(n);
    out.reserve(n);
    for (long i = 0; i < n; ++i) {
      double th = dth * (static_cast<double>(i) + 0.5);
      PolarJet p = body.polar_jet(th);
      check(p.dr);
      BoundaryNode nd;
      nd.x = {p.r * std::cos(th), p.r * std::sin(th), 0.0};
      nd.w = dth * std::hypot(p.r, p.dr);
      nd.w_coarea = dth * p.r * p.r;
      out.push_back(nd);
    }
    return out;
  }
  const int rings = boundary_rings(body, level);
  std::vector<BoundaryNode> ring;
  for (int a = 0; a < rings; ++a) {
    boundary_ring(body, level, a, ring);
    out.insert(out.end(), ring.begin(), ring.end());
  }
  return out;
}

int boundary_rings(const ConvexBody& body, int level) {
  if (body.dimension() != 3) throw DomainError("boundary_rings: d = 3 only");
  if (level < 1) throw DomainError("boundary_rings: level must be >= 1");
  return 1 << (level + 3);
}

void boundary_ring(const ConvexBody& body, int level, int ring, std::vector<BoundaryNode>& out) {
  const GaussRule& gl = gauss_legendre(boundary_rings(body, level));
  const int nl = 1 << (level + 4);
  const double dl = kTwoPi / nl;
  thread_local int trig_level = -1;
  thread_local std::vector<double> cl, sl;
  if (trig_level != level) {
    cl.resize(nl);
    sl.resize(nl);
    for (int b = 0; b < nl; ++b) {
      cl[b] = std::cos(dl * (b + 0.5));
      sl[b] = std::sin(dl * (b + 0.5));
    }
    trig_level = level;
  }
  const double z = gl.nodes[ring];
  const double sz = std::sqrt(std::max(0.0, 1.0 - z * z));
  out.resize(nl);
  for (int b = 0; b < nl; ++b) {
    Vec w = {sz * cl[b], sz * sl[b], z};
    double r = body.radial(w);
    Vec x = scaled(w, r);
    double dw = gl.weights[ring] * dl;
    double gn = norm(body.gauge_grad(x), 3);
    if (!std::isfinite(gn))
      throw DomainError("boundary_quadrature: radial function not smooth at this resolution");
    out[b] = {x, dw * r * r * r * gn, dw * r * r * r};
  }
}

double boundary_spacing(const ConvexBody& body, int level) {
  if (body.dimension() == 2) return body.stretch_max() * kTwoPi / static_cast<double>(1L << (level + 5));
  const GaussRule& gl = gauss_legendre(1 << (level + 3));
  double gap = std::acos(gl.nodes.front());  // pole to first ring
  for (std::size_t a = 0; a + 1 < gl.nodes.size(); ++a)
    gap = std::max(gap, std::acos(gl.nodes[a + 1]) - std::acos(gl.nodes[a]));
  gap = std::max(gap, kTwoPi / static_cast<double>(1 << (level + 4)));
  return body.stretch_max() * gap;
}

double adaptive_perimeter(const ConvexBody& body, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  if (body.dimension() == 2) {
    auto f = [&](double th) {
      PolarJet p = body.polar_jet(th);
      return std::hypot(p.r, p.dr);
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, kTwoPi, 20, tol);
  }
  auto inner = [&](double phi) {
    auto g = [&](double lam) {
      Vec w = direction_from_angles(std::cos(phi), lam);
      double r = body.radial(w);
      return r * r * r * norm(body.gauge_grad(scaled(w, r)), 3);
    };
    return std::sin(phi) * gauss_kronrod<double, 31>::integrate(g, 0.0, kTwoPi, 10, tol);
  };
  return gauss_kronrod<double, 31>::integrate(inner, 0.0, kPi, 10, tol);
}

double gaussian_curvature(const ConvexBody& body, const Vec& omega) {
  if (body.dimension() == 2) return curvature_from_polar(body.polar_jet(std::atan2(omega[1], omega[0])));
  return curvature_from_gauge(body.gauge_jet(scaled(omega, body.radial(omega))));
}

std::vector<Vec> inflection_normals(const ConvexBody& body, int grid_level) {
  std::vector<Vec> out;
  if (body.dimension() != 2) return out;
  if (grid_level < 1) throw DomainError("inflection_normals: grid_level must be >= 1");
  auto k = [&](double th) { return curvature_from_polar(body.polar_jet(th)); };
  const int n = 1 << (grid_level + 6);
  double prev = k(0.0);
  for (int i = 1; i <= n; ++i) {
    double a = kTwoPi * (i - 1) / n, b = kTwoPi * i / n, kb = k(b);
    if ((prev < 0.0) != (kb < 0.0)) {
      double ka = prev;
      for (int it = 0; it < 60; ++it) {
        double m = 0.5 * (a + b), km = k(m);
        if ((km < 0.0) == (ka < 0.0)) {
          a = m;
          ka = km;
        } else {
          b = m;
        }
      }
      double th = 0.5 * (a + b);
      Vec w{std::cos(th), std::sin(th), 0.0};
      Vec g = body.gauge_grad(scaled(w, body.radial(w)));
      out.push_back(scaled(g, 1.0 / norm(g, 2)));
    }
    prev = kb;
  }
  return out;
}

CurvatureCertificate curvature_certificate(const ConvexBody& body, int grid_level) {
  if (grid_level < 1) throw DomainError("curvature_certificate: grid_level must be >= 1");
  CurvatureCertificate cert;
  cert.finite_difference = !body.analytic_derivatives();
  cert.min_curvature = 1e300;
  auto consider = [&](const Vec& w, double k) {
    if (!std::isfinite(k)) throw DomainError("curvature_certificate: non-finite second derivative");
    if (k < cert.min_curvature) {
      cert.min_curvature = k;
      cert.location = w;
    }
  };
  const int n = 1 << (grid_level + 6);
  if (body.dimension() == 2) {
    for (int i = 0; i < n; ++i) {
      double th = kTwoPi * i / n;
      consider({std::cos(th), std::sin(th), 0.0}, curvature_from_polar(body.polar_jet(th)));
    }
  } else {
    const int nz = n / 2;
    consider({0.0, 0.0, 1.0}, gaussian_curvature(body, {0.0, 0.0, 1.0}));
    consider({0.0, 0.0, -1.0}, gaussian_curvature(body, {0.0, 0.0, -1.0}));
    for (int a = 0; a < nz; ++a) {
      double z = std::cos(kPi * (a + 0.5) / nz);
      for (int b = 0; b < n; ++b) {
        Vec w = direction_from_angles(z, kTwoPi * b / n);
        consider(w, gaussian_curvature(body, w));
      }
    }
  }
  if (cert.finite_difference) {
    const Vec& w = cert.location;
    double kh, kh2;
    if (body.dimension() == 2) {
      double th = std::atan2(w[1], w[0]);
      kh = curvature_from_polar(body.polar_jet_fd(th, kFdStep));
      kh2 = curvature_from_polar(body.polar_jet_fd(th, 0.5 * kFdStep));
    } else {
      Vec x = scaled(w, body.radial(w));
      kh = curvature_from_gauge(body.gauge_jet_fd(x, kFdStep));
      kh2 = curvature_from_gauge(body.gauge_jet_fd(x, 0.5 * kFdStep));
    }
    cert.richardson_gap = std::abs(kh - kh2);
  }
  cert.pass = cert.min_curvature > kCurvatureFloor;
  std::ostringstream os;
  os.precision(10);
  os << (cert.pass ? "curvature bounded below by " : "non-positive curvature ") << cert.min_curvature
     << " at direction (" << cert.location[0] << ", " << cert.location[1];
  if (body.dimension() == 3) os << ", " << cert.location[2];
  os << ")";
  cert.message = os.str();
  return cert;
}

}  // namespace distlab
