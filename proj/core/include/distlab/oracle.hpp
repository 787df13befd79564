#pragma once

#include <cstdint>
#include <vector>

#include "distlab/fractal.hpp"
#include "distlab/geometry.hpp"

namespace distlab {

// Uniform measure on the circle of radius `radius` about `center` (d = 2).
class UniformCircle final : public PointSource {
 public:
  explicit UniformCircle(double radius = 1.0, Vec center = {}) : radius_(radius), center_(center) {}
  int dimension() const override { return 2; }
  Vec sample(std::uint64_t seed, std::uint64_t index) const override;

 private:
  double radius_;
  Vec center_;
};

// Sources with at most this many atoms are enumerated exactly.
inline constexpr std::size_t kExhaustiveAtoms = 4096;

// Gauge distances ||x - y||_B, x and y points 2i and 2i+1 of the stream.
// Diagonal pairs stay in at distance 0.
std::vector<double> pair_distances(const PointSource& src, const ConvexBody& body, std::size_t n_pairs,
                                   std::uint64_t seed);

// All ordered atom pairs with their product weights; empty when the source
// is not enumerable within kExhaustiveAtoms.
struct WeightedDistances {
  std::vector<double> distance;
  std::vector<double> weight;
};
WeightedDistances exhaustive_distances(const PointSource& src, const ConvexBody& body);

struct DirectEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  std::size_t hits = 0;
  bool exhaustive = false;
};

// mu x mu{t - eps <= ||x - y|| <= t + eps} / (2 eps).
DirectEstimate nu_eps_direct(const PointSource& src, const ConvexBody& body, double t, double eps,
                             std::size_t n_pairs, std::uint64_t seed);

// Same estimator at many t from a single pair stream. With exhaustive true
// and an enumerable source the exact atom pairing is used instead.
std::vector<DirectEstimate> nu_eps_direct_batch(const PointSource& src, const ConvexBody& body,
                                                const std::vector<double>& ts, double eps, std::size_t n_pairs,
                                                std::uint64_t seed, bool exhaustive = true);

struct PairSampleStats {
  std::size_t n_pairs = 0;
  std::vector<double> bin_edges;
  std::vector<double> bin_masses;
  std::vector<double> standard_errors;
  std::uint64_t seed = 0;
  double overflow = 0.0;  // mass beyond the top edge
  bool exhaustive = false;
};

// `bins` equal bins on [0, range]; the top edge is closed.
PairSampleStats distance_histogram(const PointSource& src, const ConvexBody& body, std::size_t n_pairs, int bins,
                                   std::uint64_t seed, double range, bool exhaustive = true);

struct Coverage {
  bool covered = false;
  std::size_t cells = 0;
  std::vector<std::pair<double, double>> gaps;
};

// [a, b] in cells of width w (the last one may be shorter); a cell is hit
// when some sampled distance lies in it.
Coverage coverage_check(const PointSource& src, const ConvexBody& body, double a, double b, double w,
                        std::size_t n_pairs, std::uint64_t seed, bool exhaustive = true);

}  // namespace distlab
