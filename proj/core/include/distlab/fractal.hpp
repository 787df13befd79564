#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "distlab/fit.hpp"
#include "distlab/types.hpp"

namespace distlab {

// x -> ratio * x + shift. A zero ratio gives a constant map (an atom).
struct SimilarityMap {
  double ratio = 0.5;
  Vec shift{};
};

struct Box {
  Vec lo{};
  Vec hi{};
};

// Something the oracle can draw points from.
class PointSource {
 public:
  virtual ~PointSource() = default;
  virtual int dimension() const = 0;
  // Point number `index` of the stream keyed by `seed`.
  virtual Vec sample(std::uint64_t seed, std::uint64_t index) const = 0;
  // Exact atoms and weights when the source is small enough to enumerate.
  virtual std::optional<std::vector<std::pair<Vec, double>>> atoms() const { return std::nullopt; }
};

// Self-similar probability measure of an IFS of homotheties.
class IFSMeasure final : public PointSource {
 public:
  // d factors of the 1-D measure with maps r x and r x + (1 - r), weights 1/2.
  static IFSMeasure cantor_product(int d, double ratio);
  // Lebesgue measure on [0,1]^d written as a 2^d map IFS with ratio 1/2.
  static IFSMeasure lebesgue_cube(int d);
  static IFSMeasure product(const std::vector<IFSMeasure>& factors);
  static IFSMeasure custom(int d, std::vector<SimilarityMap> maps, std::vector<double> weights);
  // Finite measure sum_i w_i delta_{a_i}, as constant maps.
  static IFSMeasure atoms(int d, const std::vector<Vec>& points, std::vector<double> weights);

  int dimension() const override { return d_; }
  const std::vector<SimilarityMap>& maps() const { return maps_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<IFSMeasure>& factors() const { return factors_; }
  bool has_product_structure() const { return !factors_.empty(); }
  bool equal_ratios() const { return equal_ratio_; }

  double similarity_dim() const { return s_; }
  // max_i |sum r_i^s - 1| at the computed s
  double moran_residual() const;
  bool open_set_condition() const { return osc_; }
  const Box& bounding_box() const { return box_; }
  double diameter() const { return diam_; }
  // sup |x| over the bounding box; enters the truncation bound
  double radius() const { return radius_; }

  // Address length L with r_max^L * diameter < 1e-6.
  int address_length() const { return address_length_; }
  // m^L, saturating at 2^62
  std::uint64_t address_count() const;

  Vec sample(std::uint64_t seed, std::uint64_t index) const override;
  std::optional<std::vector<std::pair<Vec, double>>> atoms() const override;

  std::string describe() const;

 private:
  IFSMeasure() = default;
  void finalize();

  int d_ = 1;
  std::vector<SimilarityMap> maps_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<IFSMeasure> factors_;
  bool equal_ratio_ = true;
  double s_ = 0.0;
  bool osc_ = false;
  Box box_;
  double diam_ = 0.0;
  double radius_ = 0.0;
  int address_length_ = 1;
  std::string label_;
};

struct MuHat {
  cdouble value;
  double error_bound = 0.0;
};

inline constexpr double kMuHatBaseThreshold = 1e-3;

// Transform of the depth-truncated measure: the self-similarity recursion
// unrolled `depth` times, base case mu^ = 1. Throws TruncationError when
// |r^depth xi| is not below kMuHatBaseThreshold.
MuHat mu_hat(const IFSMeasure& m, const Vec& xi, int depth);

// Smallest depth whose truncation bound is below tol.
int mu_hat_depth(const IFSMeasure& m, double xi_norm, double tol = 1e-13);

// |mu^(xi)|^2 at a depth chosen by mu_hat_depth; batched fast path for
// product measures.
double mu_hat_sq(const IFSMeasure& m, const Vec& xi);
void mu_hat_sq_batch(const IFSMeasure& m, const Vec* xi, double* out, std::size_t n);

std::vector<Vec> sample_points(const IFSMeasure& m, std::size_t n, std::uint64_t seed);

struct FrostmanCertificate {
  RateFit fit;          // log max ball mass against log radius
  double worst_constant = 0.0;  // max_r max_c mu(B(c,r)) / r^s
  double target_s = 0.0;
  bool pass = false;
};

// pass when the fitted slope >= target_s - tol. target_s < 0 means use
// the similarity dimension.
FrostmanCertificate frostman_certificate(const IFSMeasure& m, const std::vector<double>& scales,
                                         std::size_t n, std::uint64_t seed, double target_s = -1.0,
                                         double tol = 0.15, std::size_t centers = 64);

}  // namespace distlab
