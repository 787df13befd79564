#include "distlab/fourier.hpp"

#include <math.h>  // POSIX j0, j1

#include <algorithm>
#include <sstream>

#include "distlab/parallel.hpp"
#include "kernels.hpp"

namespace distlab {

namespace {

// Rules up to this many nodes are kept in memory; bigger d = 3 rules are
// regenerated ring by ring on every pass.
constexpr std::size_t kStoreLimit = std::size_t{1} << 21;
constexpr std::size_t kBlock = 4096;
constexpr int kReseed = 64;

struct Block {
  const double* x;
  const double* y;
  const double* z;
  const double* w;
  const double* wc;
  std::size_t n;
};

struct RingBuffer {
  std::vector<BoundaryNode> nodes;
  std::vector<double> x, y, z, w, wc;
  void fill(double scale) {
    std::size_t n = nodes.size();
    x.resize(n);
    y.resize(n);
    z.resize(n);
    w.resize(n);
    wc.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = nodes[i].x[0];
      y[i] = nodes[i].x[1];
      z[i] = nodes[i].x[2];
      w[i] = scale * nodes[i].w;
      wc[i] = scale * nodes[i].w_coarea;
    }
  }
};

// (d-1)(d-2)...(d-k) t^(d-1-k): k-th derivative of t^(d-1)
double power_derivative(int d, int k, double t) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= static_cast<double>(d - 1 - i);
  return c == 0.0 ? 0.0 : c * std::pow(t, d - 1 - k);
}

double binom(int n, int k) {
  static const double tab[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  return tab[n][k];
}

// k-th derivative of J0 at x
double j0_derivative(double x, int k) {
  if (std::abs(x) < 1.0) {
    // J0(x) = sum_n (-1)^n (x/2)^(2n) / (n!)^2
    double s = 0.0, c = 1.0;
    for (int n = 0; n < 14; ++n) {
      if (n > 0) c *= -0.25 / (static_cast<double>(n) * n);
      int p = 2 * n - k;
      if (p < 0) continue;
      double f = 1.0;
      for (int i = 0; i < k; ++i) f *= static_cast<double>(2 * n - i);
      s += c * f * std::pow(x, p);
    }
    return s;
  }
  double a = ::j0(x), b = ::j1(x);
  switch (k) {
    case 0: return a;
    case 1: return -b;
    case 2: return -a + b / x;
    default: return b + a / x - 2.0 * b / (x * x);
  }
}

// k-th derivative of sin(x)/x
double sinc_derivative(double x, int k) {
  if (std::abs(x) < 0.5) {
    double s = 0.0, c = 1.0;
    for (int n = 0; n < 12; ++n) {
      if (n > 0) c *= -1.0 / ((2.0 * n) * (2.0 * n + 1.0));
      int p = 2 * n - k;
      if (p < 0) continue;
      double f = 1.0;
      for (int i = 0; i < k; ++i) f *= static_cast<double>(2 * n - i);
      s += c * f * std::pow(x, p);
    }
    return s;
  }
  double sn = std::sin(x), cs = std::cos(x);
  double g = sn / x;
  double g1 = (x * cs - sn) / (x * x);
  if (k == 0) return g;
  if (k == 1) return g1;
  double g2 = -g - 2.0 * g1 / x;
  if (k == 2) return g2;
  return (-cs - 3.0 * g2) / x;
}

}  // namespace

BoundaryRule::BoundaryRule(const ConvexBody& body, int level) : body_(body), level_(level) {
  if (level < 1) throw DomainError("BoundaryRule: level must be >= 1");
  spacing_ = boundary_spacing(body, level);
  half_ = body.symmetric();
  std::size_t n = size();
  stored_ = body.dimension() == 2 || n <= kStoreLimit;
  if (!stored_) {
    // Validate smoothness once up front, as the stored path does.
    std::vector<BoundaryNode> ring;
    boundary_ring(body, level, boundary_rings(body, level) / 2, ring);
    return;
  }
  std::vector<BoundaryNode> nodes = boundary_quadrature(body, level);
  // Both layouts put the antipode of node i of the first half at i + n/2
  // (d = 2) or in the mirrored ring (d = 3), so the first half suffices.
  const std::size_t keep = half_ ? nodes.size() / 2 : nodes.size();
  const double scale = half_ ? 2.0 : 1.0;
  for (auto& v : x_) v.resize(keep);
  w_.resize(keep);
  wc_.resize(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    for (int c = 0; c < 3; ++c) x_[c][i] = nodes[i].x[c];
    w_[i] = scale * nodes[i].w;
    wc_[i] = scale * nodes[i].w_coarea;
  }
}

std::size_t BoundaryRule::size() const {
  if (body_.dimension() == 2) return std::size_t{1} << (level_ + 5);
  return (std::size_t{1} << (level_ + 3)) * (std::size_t{1} << (level_ + 4));
}

std::size_t BoundaryRule::block_count() const {
  if (stored_) return (w_.size() + kBlock - 1) / kBlock;
  return static_cast<std::size_t>(boundary_rings(body_, level_) / (half_ ? 2 : 1));
}

template <class F>
void BoundaryRule::for_each_block(F&& f) const {
  const std::size_t nb = block_count();
  if (stored_) {
    parallel_for(nb, [&](std::size_t b) {
      std::size_t lo = b * kBlock, n = std::min(kBlock, w_.size() - lo);
      f(b, Block{x_[0].data() + lo, x_[1].data() + lo, x_[2].data() + lo, w_.data() + lo, wc_.data() + lo, n});
    });
    return;
  }
  parallel_for(nb, [&](std::size_t b) {
    thread_local RingBuffer buf;
    boundary_ring(body_, level_, static_cast<int>(b), buf.nodes);
    buf.fill(half_ ? 2.0 : 1.0);
    f(b, Block{buf.x.data(), buf.y.data(), buf.z.data(), buf.w.data(), buf.wc.data(), buf.nodes.size()});
  });
}

void BoundaryRule::check_frequency(double f) const {
  if (f > max_frequency() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "sigma_hat: |xi| = " << f << " exceeds the resolved range " << max_frequency() << " at level "
       << level_;
    throw ResolutionError(os.str());
  }
}

std::vector<cdouble> BoundaryRule::transform_batch(const std::vector<Vec>& xi, BoundaryWeight weight) const {
  const int d = body_.dimension();
  for (const auto& k : xi) check_frequency(norm(k, d));
  const std::size_t nb = block_count(), m = xi.size();
  std::vector<cdouble> part(nb * m);
  for_each_block([&](std::size_t b, const Block& blk) {
    const double* w = weight == BoundaryWeight::surface ? blk.w : blk.wc;
    for (std::size_t j = 0; j < m; ++j) {
      const double k2 = d == 3 ? xi[j][2] : 0.0;
      part[b * m + j] = half_ ? cdouble(kernel::cos_sum_dot(blk.x, blk.y, blk.z, w, xi[j][0], xi[j][1], k2, blk.n), 0.0)
                              : kernel::phase_sum_dot(blk.x, blk.y, blk.z, w, xi[j][0], xi[j][1], k2, blk.n);
    }
  });
  std::vector<cdouble> out(m, 0.0);
  for (std::size_t b = 0; b < nb; ++b)
    for (std::size_t j = 0; j < m; ++j) out[j] += part[b * m + j];
  return out;
}

cdouble BoundaryRule::transform(const Vec& xi, BoundaryWeight weight) const {
  return transform_batch({xi}, weight)[0];
}

std::vector<std::array<cdouble, 4>> BoundaryRule::scaled_jet_batch(const std::vector<Vec>& xi, double t,
                                                                   BoundaryWeight weight) const {
  const int d = body_.dimension();
  if (!(t > 0.0)) throw DomainError("scaled_jet: t must be positive");
  for (const auto& k : xi) check_frequency(t * norm(k, d));
  const std::size_t nb = block_count(), m = xi.size();
  std::vector<cdouble> part(nb * m * 4, 0.0);
  for_each_block([&](std::size_t b, const Block& blk) {
    const double* w = weight == BoundaryWeight::surface ? blk.w : blk.wc;
    for (std::size_t j = 0; j < m; ++j)
      kernel::phase_moments(blk.x, blk.y, blk.z, w, xi[j][0], xi[j][1], d == 3 ? xi[j][2] : 0.0, t, blk.n,
                            &part[(b * m + j) * 4]);
  });
  std::vector<std::array<cdouble, 4>> out(m);
  const cdouble c(0.0, -kTwoPi);
  for (std::size_t j = 0; j < m; ++j) {
    cdouble s[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t b = 0; b < nb; ++b)
      for (int q = 0; q < 4; ++q) s[q] += part[(b * m + j) * 4 + q];
    // antipodal pairs: a -> -a leaves 2 Re for even moments, 2i Im for odd
    if (half_)
      for (int q = 0; q < 4; ++q) s[q] = q % 2 == 0 ? cdouble(s[q].real(), 0.0) : cdouble(0.0, s[q].imag());
    // d^i/dt^i transform(t xi) = (-2 pi i)^i S_i; Leibniz against t^(d-1).
    for (int order = 0; order < 4; ++order) {
      cdouble v = 0.0, ci = 1.0;
      for (int i = 0; i <= order; ++i) {
        v += binom(order, i) * power_derivative(d, order - i, t) * ci * s[i];
        ci *= c;
      }
      out[j][order] = v;
    }
  }
  return out;
}

cdouble BoundaryRule::scaled_jet(const Vec& xi, double t, int m, BoundaryWeight weight) const {
  if (m < 0 || m > 3) throw DomainError("scaled_jet: order must be 0..3");
  return scaled_jet_batch({xi}, t, weight)[0][m];
}

std::vector<cdouble> BoundaryRule::profile(const Vec& eta, double du, std::size_t count,
                                           BoundaryWeight weight) const {
  const int d = body_.dimension();
  if (count == 0) return {};
  check_frequency(du * static_cast<double>(count - 1) * norm(eta, d));
  std::vector<cdouble> out(count, 0.0);
  std::vector<double> a, zr, zi, sr, si;
  const std::size_t nb = block_count();
  RingBuffer ring;
  for (std::size_t b = 0; b < nb; ++b) {
    Block blk;
    if (stored_) {
      std::size_t lo = b * kBlock, n = std::min(kBlock, w_.size() - lo);
      blk = {x_[0].data() + lo, x_[1].data() + lo, x_[2].data() + lo, w_.data() + lo, wc_.data() + lo, n};
    } else {
      boundary_ring(body_, level_, static_cast<int>(b), ring.nodes);
      ring.fill(half_ ? 2.0 : 1.0);
      blk = {ring.x.data(), ring.y.data(), ring.z.data(), ring.w.data(), ring.wc.data(), ring.nodes.size()};
    }
    const std::size_t n = blk.n;
    const double* w = weight == BoundaryWeight::surface ? blk.w : blk.wc;
    a.resize(n);
    zr.resize(n);
    zi.resize(n);
    sr.resize(n);
    si.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = blk.x[i] * eta[0] + blk.y[i] * eta[1] + (d == 3 ? blk.z[i] * eta[2] : 0.0);
      kernel::CosSin e = kernel::sincos_turns(du * a[i]);
      zr[i] = e.c;
      zi[i] = -e.s;
    }
    for (std::size_t k = 0; k < count; ++k) {
      if (k % kReseed == 0) {
        double u = du * static_cast<double>(k);
        for (std::size_t i = 0; i < n; ++i) {
          kernel::CosSin e = kernel::sincos_turns(u * a[i]);
          sr[i] = e.c;
          si[i] = -e.s;
        }
      }
      out[k] += kernel::rotate_accumulate(w, sr.data(), si.data(), zr.data(), zi.data(), n);
    }
  }
  if (half_)
    for (auto& v : out) v = v.real();
  return out;
}

int max_boundary_level(int d) { return d == 2 ? 17 : 12; }

int resolving_level(const ConvexBody& body, double freq, int start_level, int max_level) {
  if (max_level < 0) max_level = max_boundary_level(body.dimension());
  int level = std::max(1, start_level);
  while (boundary_spacing(body, level) * 10.0 * freq > 1.0) {
    if (++level > max_level) {
      std::ostringstream os;
      os << "sigma_hat: |xi| = " << freq << " needs a boundary level above the cap " << max_level;
      throw ResolutionError(os.str());
    }
  }
  return level;
}

cdouble sigma_hat(const ConvexBody& body, const Vec& xi, int level, BoundaryWeight weight) {
  return BoundaryRule(body, level).transform(xi, weight);
}

double round_sigma_hat(int d, double a, double u, BoundaryWeight weight) {
  return round_sigma_hat_derivative(d, a, u, 0, weight);
}

double round_sigma_hat_derivative(int d, double a, double u, int k, BoundaryWeight weight) {
  if (k < 0 || k > 3) throw DomainError("round_sigma_hat_derivative: order must be 0..3");
  const double c = kTwoPi * a;
  const double chain = std::pow(c, k);
  double v;
  if (d == 2)
    v = a * kTwoPi * j0_derivative(c * u, k) * chain;
  else
    v = a * a * 4.0 * kPi * sinc_derivative(c * u, k) * chain;
  return weight == BoundaryWeight::coarea ? a * v : v;
}

std::vector<Vec> default_directions(int d, int count) {
  if (count < 1) throw DomainError("default_directions: count must be >= 1");
  std::vector<Vec> out;
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      double th = kPi * k / count;
      out.push_back({std::cos(th), std::sin(th), 0.0});
    }
    return out;
  }
  // spiral over the upper hemisphere, starting at the pole
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    double z = 1.0 - static_cast<double>(k) / count;
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back({s * std::cos(golden * k), s * std::sin(golden * k), z});
  }
  return out;
}

namespace {

// Frequencies R_i + window offsets for every direction; groups them by level.
struct WindowPlan {
  std::vector<double> radii;
  std::vector<std::vector<double>> window;
  std::vector<int> levels;
};

WindowPlan plan_windows(const ConvexBody& body, const std::vector<double>& radii, int samples) {
  if (samples < 1) throw DomainError("decay: window_samples must be >= 1");
  WindowPlan p;
  p.radii = radii;
  const double half = 0.5 / body.r_min();
  int level = 1;
  for (double R : radii) {
    if (!(R > 0.0)) throw DomainError("decay: radii must be positive");
    std::vector<double> w;
    for (int i = 0; i < samples; ++i) w.push_back(samples == 1 ? R : R + half * i / (samples - 1));
    level = resolving_level(body, w.back(), 1);
    p.window.push_back(std::move(w));
    p.levels.push_back(level);
  }
  return p;
}

double span_octaves(const std::vector<double>& radii) {
  auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  return std::log2(*hi / *lo);
}

}  // namespace

DecayCertificate decay_certificate(const ConvexBody& body, const std::vector<double>& radii,
                                   const std::vector<Vec>& directions, const DecayOptions& opt) {
  const int d = body.dimension();
  if (radii.size() < 5) throw DomainError("decay_certificate: need at least 5 radii");
  if (span_octaves(radii) < 4.0 - 1e-12) throw DomainError("decay_certificate: radii must span 4 octaves");
  if (directions.empty()) throw DomainError("decay_certificate: no directions");
  WindowPlan plan = plan_windows(body, radii, opt.window_samples);
  DecayCertificate cert;
  cert.radii = radii;
  cert.levels = plan.levels;
  cert.envelope.assign(radii.size(), 0.0);
  std::vector<int> distinct = plan.levels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (int level : distinct) {
    std::vector<Vec> xs;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (plan.levels[i] != level) continue;
      for (const Vec& dir : directions) {
        double n = norm(dir, d);
        for (double R : plan.window[i]) {
          xs.push_back(scaled(dir, R / n));
          owner.push_back(i);
        }
      }
    }
    BoundaryRule rule(body, level);
    std::vector<cdouble> v = rule.transform_batch(xs, opt.weight);
    for (std::size_t k = 0; k < v.size(); ++k)
      cert.envelope[owner[k]] = std::max(cert.envelope[owner[k]], std::abs(v[k]));
  }
  const double half = 0.5 * (d - 1);
  for (std::size_t i = 0; i < radii.size(); ++i)
    cert.envelope_constant = std::max(cert.envelope_constant, cert.envelope[i] * std::pow(radii[i], half));
  cert.fit = fit_power_law(radii, cert.envelope);
  cert.fit.predicted_exponent = -half;
  cert.fit.tolerance = opt.tolerance;
  cert.fit.pass = opt.two_sided ? std::abs(cert.fit.exponent + half) <= opt.tolerance
                                : cert.fit.exponent <= -half + opt.tolerance;
  return cert;
}

JetEnvelope jet_envelope(const ConvexBody& body, const std::vector<double>& radii,
                         const std::vector<Vec>& directions, int m, double spread_limit, double tolerance) {
  const int d = body.dimension();
  if (m < 0 || m > 3) throw DomainError("jet_envelope: order must be 0..3");
  if (radii.size() < 5) throw DomainError("jet_envelope: need at least 5 radii");
  WindowPlan plan = plan_windows(body, radii, 9);
  JetEnvelope env;
  env.radii = radii;
  std::vector<double> maxima(radii.size(), 0.0);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::vector<Vec> xs;
    for (const Vec& dir : directions) {
      double n = norm(dir, d);
      for (double R : plan.window[i]) xs.push_back(scaled(dir, R / n));
    }
    BoundaryRule rule(body, plan.levels[i]);
    for (const auto& j : rule.scaled_jet_batch(xs, 1.0)) maxima[i] = std::max(maxima[i], std::abs(j[m]));
  }
  const double power = 0.5 * (d - 1) - m;
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double v = maxima[i] * std::pow(radii[i], power);
    env.normalised.push_back(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  env.spread = lo > 0.0 ? hi / lo : 1e300;
  env.fit = fit_power_law(radii, maxima);
  env.fit.predicted_exponent = m - 0.5 * (d - 1);  // not -power, which prints as -0
  env.fit.tolerance = tolerance;
  env.fit.pass = env.fit.exponent <= env.fit.predicted_exponent + tolerance;
  env.pass = env.fit.pass && env.spread < spread_limit && span_octaves(radii) >= 4.0 - 1e-12;
  return env;
}

double mollifier_hat(double eps, double xi_norm) {
  if (!(eps >= 0.0)) throw DomainError("mollifier_hat: epsilon must be >= 0");
  double u = eps * xi_norm;
  return std::exp(-kPi * u * u);
}

double mollifier_hat(double eps, const Vec& xi, int d) { return mollifier_hat(eps, norm(xi, d)); }

}  // namespace distlab
