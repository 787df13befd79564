#include "distlab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "distlab/parallel.hpp"
#include "distlab/rng.hpp"

namespace distlab {

namespace {

constexpr std::size_t kBlock = 1 << 14;

bool use_exhaustive(const PointSource& src, bool allowed, std::vector<std::pair<Vec, double>>& atoms) {
  if (!allowed) return false;
  auto a = src.atoms();
  if (!a || a->size() > kExhaustiveAtoms) return false;
  atoms = std::move(*a);
  return true;
}

void check_body(const PointSource& src, const ConvexBody& body) {
  if (src.dimension() != body.dimension()) throw DomainError("oracle: source and body dimensions differ");
}

}  // namespace

Vec UniformCircle::sample(std::uint64_t seed, std::uint64_t index) const {
  CounterRng rng(seed, index);
  double a = kTwoPi * rng.uniform();
  return {center_[0] + radius_ * std::cos(a), center_[1] + radius_ * std::sin(a), 0.0};
}

std::vector<double> pair_distances(const PointSource& src, const ConvexBody& body, std::size_t n_pairs,
                                   std::uint64_t seed) {
  check_body(src, body);
  std::vector<double> out(n_pairs);
  const std::size_t nb = (n_pairs + kBlock - 1) / kBlock;
  parallel_for(nb, [&](std::size_t b) {
    std::size_t end = std::min(n_pairs, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      Vec x = src.sample(seed, 2 * i), y = src.sample(seed, 2 * i + 1);
      out[i] = gauge_norm(body, sub(x, y));
    }
  });
  return out;
}

WeightedDistances exhaustive_distances(const PointSource& src, const ConvexBody& body) {
  check_body(src, body);
  WeightedDistances w;
  std::vector<std::pair<Vec, double>> atoms;
  if (!use_exhaustive(src, true, atoms)) return w;
  const std::size_t n = atoms.size();
  w.distance.resize(n * n);
  w.weight.resize(n * n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      w.distance[i * n + j] = gauge_norm(body, sub(atoms[i].first, atoms[j].first));
      w.weight[i * n + j] = atoms[i].second * atoms[j].second;
    }
  });
  return w;
}

DirectEstimate nu_eps_direct(const PointSource& src, const ConvexBody& body, double t, double eps,
                             std::size_t n_pairs, std::uint64_t seed) {
  return nu_eps_direct_batch(src, body, {t}, eps, n_pairs, seed, false).front();
}

std::vector<DirectEstimate> nu_eps_direct_batch(const PointSource& src, const ConvexBody& body,
                                                const std::vector<double>& ts, double eps, std::size_t n_pairs,
                                                std::uint64_t seed, bool exhaustive) {
  if (!(eps > 0.0)) throw DomainError("nu_eps_direct: eps must be positive");
  std::vector<DirectEstimate> out(ts.size());
  std::vector<std::pair<Vec, double>> atoms;
  if (use_exhaustive(src, exhaustive, atoms)) {
    WeightedDistances w = exhaustive_distances(src, body);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      double mass = 0.0;
      std::size_t hits = 0;
      for (std::size_t k = 0; k < w.distance.size(); ++k)
        if (w.distance[k] >= ts[i] - eps && w.distance[k] <= ts[i] + eps) {
          mass += w.weight[k];
          ++hits;
        }
      out[i] = {mass / (2.0 * eps), 0.0, hits, true};
    }
    return out;
  }
  if (n_pairs == 0) throw DomainError("nu_eps_direct: need at least one pair");
  std::vector<double> dist = pair_distances(src, body, n_pairs, seed);
  std::sort(dist.begin(), dist.end());
  const double n = static_cast<double>(n_pairs);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    auto lo = std::lower_bound(dist.begin(), dist.end(), ts[i] - eps);
    auto hi = std::upper_bound(dist.begin(), dist.end(), ts[i] + eps);
    std::size_t hits = static_cast<std::size_t>(hi - lo);
    double p = static_cast<double>(hits) / n;
    out[i] = {p / (2.0 * eps), std::sqrt(p * (1.0 - p) / n) / (2.0 * eps), hits, false};
  }
  return out;
}

PairSampleStats distance_histogram(const PointSource& src, const ConvexBody& body, std::size_t n_pairs, int bins,
                                   std::uint64_t seed, double range, bool exhaustive) {
  if (bins < 16) throw DomainError("distance_histogram: need at least 16 bins");
  if (!(range > 0.0)) throw DomainError("distance_histogram: range must be positive");
  PairSampleStats s;
  s.seed = seed;
  s.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) s.bin_edges[static_cast<std::size_t>(i)] = range * i / bins;
  s.bin_masses.assign(static_cast<std::size_t>(bins), 0.0);
  s.standard_errors.assign(static_cast<std::size_t>(bins), 0.0);
  auto bin_of = [&](double x) -> long {
    if (x > range) return -1;
    long b = static_cast<long>(x / range * bins);
    return std::min<long>(b, bins - 1);
  };
  std::vector<std::pair<Vec, double>> atoms;
  if (use_exhaustive(src, exhaustive, atoms)) {
    WeightedDistances w = exhaustive_distances(src, body);
    s.exhaustive = true;
    s.n_pairs = w.distance.size();
    for (std::size_t k = 0; k < w.distance.size(); ++k) {
      long b = bin_of(w.distance[k]);
      if (b < 0) s.overflow += w.weight[k];
      else s.bin_masses[static_cast<std::size_t>(b)] += w.weight[k];
    }
    return s;
  }
  if (n_pairs == 0) throw DomainError("distance_histogram: need at least one pair");
  s.n_pairs = n_pairs;
  std::vector<double> dist = pair_distances(src, body, n_pairs, seed);
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  std::size_t over = 0;
  for (double x : dist) {
    long b = bin_of(x);
    if (b < 0) ++over;
    else ++counts[static_cast<std::size_t>(b)];
  }
  const double n = static_cast<double>(n_pairs);
  for (std::size_t b = 0; b < counts.size(); ++b) {
    double p = static_cast<double>(counts[b]) / n;
    s.bin_masses[b] = p;
    s.standard_errors[b] = std::sqrt(p * (1.0 - p) / n);
  }
  s.overflow = static_cast<double>(over) / n;
  return s;
}

Coverage coverage_check(const PointSource& src, const ConvexBody& body, double a, double b, double w,
                        std::size_t n_pairs, std::uint64_t seed, bool exhaustive) {
  if (!(w > 0.0)) throw DomainError("coverage_check: width must be positive");
  if (!(b > a)) throw DomainError("coverage_check: need a < b");
  Coverage c;
  c.cells = static_cast<std::size_t>(std::ceil((b - a) / w * (1.0 - 1e-12)));
  std::vector<char> hit(c.cells, 0);
  auto mark = [&](double x) {
    if (x < a || x > b) return;
    std::size_t k = std::min(c.cells - 1, static_cast<std::size_t>((x - a) / w));
    hit[k] = 1;
  };
  std::vector<std::pair<Vec, double>> atoms;
  if (use_exhaustive(src, exhaustive, atoms)) {
    WeightedDistances wd = exhaustive_distances(src, body);
    for (std::size_t k = 0; k < wd.distance.size(); ++k)
      if (wd.weight[k] > 0.0) mark(wd.distance[k]);
  } else {
    for (double x : pair_distances(src, body, n_pairs, seed)) mark(x);
  }
  for (std::size_t k = 0; k < c.cells; ++k)
    if (!hit[k]) c.gaps.emplace_back(a + k * w, std::min(b, a + (k + 1) * w));
  c.covered = c.gaps.empty();
  return c;
}

}  // namespace distlab
