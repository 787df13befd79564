#include "distlab/fractal.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <functional>
#include <sstream>

#include "distlab/parallel.hpp"
#include "distlab/rng.hpp"
#include "kernels.hpp"

namespace distlab {

namespace {

constexpr std::size_t kExhaustiveLimit = 4096;

Vec apply_map(const SimilarityMap& f, const Vec& x) {
  return {f.ratio * x[0] + f.shift[0], f.ratio * x[1] + f.shift[1], f.ratio * x[2] + f.shift[2]};
}

Vec fixed_point(const SimilarityMap& f) {
  double k = 1.0 / (1.0 - f.ratio);
  return scaled(f.shift, k);
}

// m(eta) = sum_i p_i exp(-2 pi i b_i . eta)
cdouble symbol(const IFSMeasure& m, const Vec& eta) {
  cdouble s = 0.0;
  const auto& maps = m.maps();
  const auto& w = m.weights();
  for (std::size_t i = 0; i < maps.size(); ++i) {
    double ph = dot(maps[i].shift, eta, m.dimension());
    kernel::CosSin e = kernel::sincos_turns(ph);
    s += w[i] * cdouble(e.c, -e.s);
  }
  return s;
}

double max_ratio(const IFSMeasure& m) {
  double r = 0.0;
  for (const auto& f : m.maps()) r = std::max(r, f.ratio);
  return r;
}

cdouble mu_hat_tree(const IFSMeasure& m, const Vec& xi, int depth) {
  if (depth == 0) return 1.0;
  cdouble s = 0.0;
  const auto& maps = m.maps();
  for (std::size_t i = 0; i < maps.size(); ++i) {
    double ph = dot(maps[i].shift, xi, m.dimension());
    kernel::CosSin e = kernel::sincos_turns(ph);
    s += m.weights()[i] * cdouble(e.c, -e.s) * mu_hat_tree(m, scaled(xi, maps[i].ratio), depth - 1);
  }
  return s;
}

// Two equally weighted maps with a common ratio: |m(eta)|^2 = cos^2(pi gap eta).
bool two_map_factor(const IFSMeasure& f, double& gap) {
  if (f.dimension() != 1 || f.maps().size() != 2 || !f.equal_ratios()) return false;
  if (f.weights()[0] != 0.5 || f.weights()[1] != 0.5) return false;
  gap = f.maps()[1].shift[0] - f.maps()[0].shift[0];
  return true;
}

}  // namespace

IFSMeasure IFSMeasure::custom(int d, std::vector<SimilarityMap> maps, std::vector<double> weights) {
  if (d < 1 || d > 3) throw DomainError("IFS: dimension must be 1, 2 or 3");
  if (maps.empty() || maps.size() != weights.size()) throw DomainError("IFS: need one weight per map");
  IFSMeasure m;
  m.d_ = d;
  m.maps_ = std::move(maps);
  m.weights_ = std::move(weights);
  m.label_ = "custom_ifs";
  m.finalize();
  return m;
}

IFSMeasure IFSMeasure::cantor_product(int d, double ratio) {
  if (!(ratio > 0.0 && ratio <= 0.5)) throw DomainError("cantor_product: ratio must lie in (0, 1/2]");
  SimilarityMap a{ratio, {0.0, 0.0, 0.0}};
  SimilarityMap b{ratio, {1.0 - ratio, 0.0, 0.0}};
  IFSMeasure f = custom(1, {a, b}, {0.5, 0.5});
  IFSMeasure m = product(std::vector<IFSMeasure>(d, f));
  std::ostringstream os;
  os.precision(17);
  os << "cantor_product(d=" << d << ",ratio=" << ratio << ")";
  m.label_ = os.str();
  return m;
}

IFSMeasure IFSMeasure::lebesgue_cube(int d) {
  IFSMeasure m = cantor_product(d, 0.5);
  m.label_ = "lebesgue_cube(d=" + std::to_string(d) + ")";
  return m;
}

IFSMeasure IFSMeasure::product(const std::vector<IFSMeasure>& factors) {
  if (factors.size() < 2 || factors.size() > 3) throw DomainError("product: need 2 or 3 factors");
  double r = -1.0;
  for (const auto& f : factors) {
    if (f.dimension() != 1) throw DomainError("product: factors must be one-dimensional");
    if (!f.equal_ratios()) throw DomainError("product: factors need a common ratio");
    if (r < 0.0) r = f.maps()[0].ratio;
    if (f.maps()[0].ratio != r) throw DomainError("product: factors need the same ratio");
  }
  IFSMeasure m;
  m.d_ = static_cast<int>(factors.size());
  m.maps_.push_back({r, {0.0, 0.0, 0.0}});
  m.weights_.push_back(1.0);
  for (int c = 0; c < m.d_; ++c) {
    std::vector<SimilarityMap> maps;
    std::vector<double> w;
    for (std::size_t i = 0; i < m.maps_.size(); ++i) {
      for (std::size_t j = 0; j < factors[c].maps().size(); ++j) {
        SimilarityMap f = m.maps_[i];
        f.shift[c] = factors[c].maps()[j].shift[0];
        maps.push_back(f);
        w.push_back(m.weights_[i] * factors[c].weights()[j]);
      }
    }
    m.maps_ = std::move(maps);
    m.weights_ = std::move(w);
  }
  m.factors_ = factors;
  m.label_ = "product_ifs";
  m.finalize();
  return m;
}

IFSMeasure IFSMeasure::atoms(int d, const std::vector<Vec>& points, std::vector<double> weights) {
  std::vector<SimilarityMap> maps;
  for (const auto& p : points) maps.push_back({0.0, p});
  IFSMeasure m = custom(d, std::move(maps), std::move(weights));
  m.label_ = "atoms";
  return m;
}

void IFSMeasure::finalize() {
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0)) throw DomainError("IFS: weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("IFS: weights must sum to one");
  for (double& w : weights_) w /= sum;
  sum = 0.0;
  cumulative_.clear();
  for (double w : weights_) {
    sum += w;
    cumulative_.push_back(sum);
  }
  if (std::abs(sum - 1.0) > 1e-15) throw DomainError("IFS: weights do not sum to one to 1e-15");
  cumulative_.back() = 1.0;

  equal_ratio_ = true;
  for (const auto& f : maps_) {
    if (!(f.ratio >= 0.0 && f.ratio < 1.0)) throw DomainError("IFS: ratios must lie in [0, 1)");
    if (f.ratio != maps_[0].ratio) equal_ratio_ = false;
  }

  // Moran equation sum r_i^s = 1 over the non-degenerate maps.
  std::vector<double> rs;
  for (const auto& f : maps_)
    if (f.ratio > 0.0) rs.push_back(f.ratio);
  if (rs.size() <= 1) {
    s_ = 0.0;
  } else if (equal_ratio_) {
    s_ = std::log(static_cast<double>(rs.size())) / std::log(1.0 / rs[0]);
  } else {
    auto f = [&](double s) {
      double t = -1.0;
      for (double r : rs) t += std::pow(r, s);
      return t;
    };
    std::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto root = boost::math::tools::toms748_solve(f, 0.0, 64.0, tol, iters);
    s_ = 0.5 * (root.first + root.second);
  }

  // Attractor bounding box per coordinate.
  for (int c = 0; c < 3; ++c) {
    if (c >= d_) {
      box_.lo[c] = box_.hi[c] = 0.0;
      continue;
    }
    double lo = fixed_point(maps_[0])[c], hi = lo;
    for (int it = 0; it < 100000; ++it) {
      double nlo = 1e300, nhi = -1e300;
      for (const auto& f : maps_) {
        nlo = std::min(nlo, f.ratio * lo + f.shift[c]);
        nhi = std::max(nhi, f.ratio * hi + f.shift[c]);
      }
      bool done = nlo == lo && nhi == hi;
      lo = nlo;
      hi = nhi;
      if (done) break;
    }
    box_.lo[c] = lo;
    box_.hi[c] = hi;
  }
  Vec ext = sub(box_.hi, box_.lo);
  diam_ = norm(ext, d_);
  radius_ = 0.0;
  for (int corner = 0; corner < (1 << d_); ++corner) {
    Vec p{};
    for (int c = 0; c < d_; ++c) p[c] = (corner >> c & 1) ? box_.hi[c] : box_.lo[c];
    radius_ = std::max(radius_, norm(p, d_));
  }

  // Open-set condition on the bounding box.
  osc_ = true;
  for (std::size_t i = 0; i < maps_.size() && osc_; ++i) {
    for (std::size_t j = i + 1; j < maps_.size() && osc_; ++j) {
      bool overlap = true;
      for (int c = 0; c < d_; ++c) {
        double lo_i = maps_[i].ratio * box_.lo[c] + maps_[i].shift[c];
        double hi_i = maps_[i].ratio * box_.hi[c] + maps_[i].shift[c];
        double lo_j = maps_[j].ratio * box_.lo[c] + maps_[j].shift[c];
        double hi_j = maps_[j].ratio * box_.hi[c] + maps_[j].shift[c];
        double ext_i = hi_i - lo_i, ext_j = hi_j - lo_j;
        double tol = 1e-12 * std::max(1.0, ext[c]);
        if (ext_i > 0.0 && ext_j > 0.0) {
          if (std::min(hi_i, hi_j) - std::max(lo_i, lo_j) <= tol) overlap = false;
        } else if (std::abs(0.5 * (lo_i + hi_i) - 0.5 * (lo_j + hi_j)) > tol) {
          overlap = false;
        }
      }
      if (overlap) osc_ = false;
    }
  }

  double rmax = max_ratio(*this);
  address_length_ = 1;
  if (rmax > 0.0 && diam_ > 0.0)
    while (std::pow(rmax, address_length_) * diam_ >= 1e-6) ++address_length_;
}

double IFSMeasure::moran_residual() const {
  std::vector<double> rs;
  for (const auto& f : maps_)
    if (f.ratio > 0.0) rs.push_back(f.ratio);
  if (rs.size() <= 1) return 0.0;
  double t = -1.0;
  for (double r : rs) t += std::pow(r, s_);
  return std::abs(t);
}

std::uint64_t IFSMeasure::address_count() const {
  std::uint64_t c = 1;
  for (int i = 0; i < address_length_; ++i) {
    if (c > (std::uint64_t{1} << 62) / maps_.size()) return std::uint64_t{1} << 62;
    c *= maps_.size();
  }
  return c;
}

Vec IFSMeasure::sample(std::uint64_t seed, std::uint64_t index) const {
  CounterRng rng(seed, index);
  Vec x = fixed_point(maps_[0]);
  const std::size_t m = maps_.size();
  const bool uniform = std::all_of(weights_.begin(), weights_.end(),
                                   [&](double w) { return w == weights_[0]; });
  for (int k = 0; k < address_length_; ++k) {
    double u = rng.uniform();
    std::size_t a;
    if (uniform) {
      a = std::min(m - 1, static_cast<std::size_t>(u * static_cast<double>(m)));
    } else {
      a = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
                                   cumulative_.begin());
      a = std::min(a, m - 1);
    }
    x = apply_map(maps_[a], x);
  }
  return x;
}

std::optional<std::vector<std::pair<Vec, double>>> IFSMeasure::atoms() const {
  if (address_count() > kExhaustiveLimit) return std::nullopt;
  std::vector<std::pair<Vec, double>> out;
  std::function<void(int, const Vec&, double)> rec = [&](int level, const Vec& x, double w) {
    if (level == address_length_) {
      out.emplace_back(x, w);
      return;
    }
    for (std::size_t i = 0; i < maps_.size(); ++i) rec(level + 1, apply_map(maps_[i], x), w * weights_[i]);
  };
  rec(0, fixed_point(maps_[0]), 1.0);
  return out;
}

std::string IFSMeasure::describe() const {
  if (label_ != "custom_ifs" && label_ != "product_ifs" && label_ != "atoms") return label_;
  std::ostringstream os;
  os.precision(17);
  os << label_ << "(d=" << d_ << ";";
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    os << (i ? "|" : "") << maps_[i].ratio << ":";
    for (int c = 0; c < d_; ++c) os << (c ? "," : "") << maps_[i].shift[c];
    os << ":" << weights_[i];
  }
  os << ")";
  return os.str();
}

MuHat mu_hat(const IFSMeasure& m, const Vec& xi, int depth) {
  if (depth < 1) throw DomainError("mu_hat: depth must be >= 1");
  MuHat out;
  if (m.has_product_structure()) {
    out.value = 1.0;
    for (std::size_t c = 0; c < m.factors().size(); ++c) {
      MuHat f = mu_hat(m.factors()[c], {xi[c], 0.0, 0.0}, depth);
      out.value *= f.value;
      out.error_bound += f.error_bound;
    }
  } else {
    double rmax = max_ratio(m);
    double tail = std::pow(rmax, depth) * norm(xi, m.dimension());
    if (!(tail < kMuHatBaseThreshold)) {
      std::ostringstream os;
      os << "mu_hat: depth " << depth << " leaves |r^depth xi| = " << tail << " above the base threshold "
         << kMuHatBaseThreshold;
      throw TruncationError(os.str());
    }
    if (m.equal_ratios()) {
      double r = m.maps()[0].ratio;
      cdouble v = 1.0;
      Vec eta = xi;
      for (int k = 0; k < depth; ++k) {
        v *= symbol(m, eta);
        eta = scaled(eta, r);
      }
      out.value = v;
    } else {
      double terms = std::pow(static_cast<double>(m.maps().size()), depth);
      if (terms > 1.7e7) throw DomainError("mu_hat: unequal-ratio recursion too deep for this depth");
      out.value = mu_hat_tree(m, xi, depth);
    }
    out.error_bound = kTwoPi * tail * m.radius();
  }
  if (std::abs(out.value) > 1.0 + 1e-12) throw std::logic_error("mu_hat: |mu^| exceeds 1");
  return out;
}

int mu_hat_depth(const IFSMeasure& m, double xi_norm, double tol) {
  double rmax = max_ratio(m);
  if (rmax == 0.0 || xi_norm == 0.0) return 1;
  int depth = 1;
  double scale = std::max(m.radius(), 1e-300);
  while (std::pow(rmax, depth) * xi_norm >= kMuHatBaseThreshold ||
         kTwoPi * std::pow(rmax, depth) * xi_norm * scale >= tol)
    ++depth;
  return depth;
}

double mu_hat_sq(const IFSMeasure& m, const Vec& xi) {
  double n = norm(xi, m.dimension());
  double v = std::abs(mu_hat(m, xi, mu_hat_depth(m, n)).value);
  return v * v;
}

void mu_hat_sq_batch(const IFSMeasure& m, const Vec* xi, double* out, std::size_t n) {
  if (n == 0) return;
  bool fast = m.has_product_structure();
  std::vector<double> gaps;
  double g1;
  if (!fast && two_map_factor(m, g1)) {
    fast = true;
    gaps.push_back(g1);
  } else if (fast) {
    for (const auto& f : m.factors()) {
      double g;
      if (!two_map_factor(f, g)) {
        fast = false;
        break;
      }
      gaps.push_back(g);
    }
  }
  if (!fast) {
    for (std::size_t i = 0; i < n; ++i) out[i] = mu_hat_sq(m, xi[i]);
    return;
  }
  const int d = m.dimension();
  double maxn = 0.0;
  for (std::size_t i = 0; i < n; ++i) maxn = std::max(maxn, norm(xi[i], d));
  const int depth = mu_hat_depth(m, maxn);
  const double r = m.maps()[0].ratio;
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0;
  for (int c = 0; c < d; ++c) {
    double scale = 0.5 * gaps[c];
    double amax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = scale * xi[i][c];
      amax = std::max(amax, std::abs(a[i]));
    }
    for (int k = 0; k < depth; ++k) {
      // cos^2 rounds to exactly 1 beyond this point.
      if (kTwoPi * amax < 1e-9) break;
      kernel::mul_cos2(a.data(), out, n);
      for (std::size_t i = 0; i < n; ++i) a[i] *= r;
      amax *= r;
    }
  }
}

std::vector<Vec> sample_points(const IFSMeasure& m, std::size_t n, std::uint64_t seed) {
  std::vector<Vec> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = m.sample(seed, i); });
  return out;
}

FrostmanCertificate frostman_certificate(const IFSMeasure& m, const std::vector<double>& scales,
                                         std::size_t n, std::uint64_t seed, double target_s, double tol,
                                         std::size_t centers) {
  if (scales.size() < 5) throw DomainError("frostman_certificate: need at least 5 scales");
  for (double r : scales)
    if (!(r > 0.0 && (m.diameter() == 0.0 || r < m.diameter())))
      throw DomainError("frostman_certificate: scales must lie in (0, diameter)");
  FrostmanCertificate cert;
  cert.target_s = target_s < 0.0 ? m.similarity_dim() : target_s;
  std::vector<Vec> pts = sample_points(m, n, seed);
  std::vector<Vec> ctr = sample_points(m, centers, CounterRng::mix(seed + 0x51ED));
  const int d = m.dimension();
  std::vector<double> masses(scales.size(), 0.0);
  std::vector<std::vector<std::size_t>> counts(ctr.size(), std::vector<std::size_t>(scales.size(), 0));
  parallel_for(ctr.size(), [&](std::size_t c) {
    for (const auto& p : pts) {
      double dist = norm(sub(p, ctr[c]), d);
      for (std::size_t k = 0; k < scales.size(); ++k)
        if (dist <= scales[k]) ++counts[c][k];
    }
  });
  for (std::size_t k = 0; k < scales.size(); ++k) {
    std::size_t best = 0;
    for (const auto& row : counts) best = std::max(best, row[k]);
    masses[k] = static_cast<double>(best) / static_cast<double>(n);
    cert.worst_constant = std::max(cert.worst_constant, masses[k] / std::pow(scales[k], cert.target_s));
  }
  cert.fit = fit_power_law(scales, masses);
  cert.fit.predicted_exponent = cert.target_s;
  cert.fit.tolerance = tol;
  cert.pass = cert.fit.exponent >= cert.target_s - tol;
  cert.fit.pass = cert.pass;
  return cert;
}

}  // namespace distlab
