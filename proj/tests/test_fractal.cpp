#include <gtest/gtest.h>

#include "distlab/fractal.hpp"

using namespace distlab;

TEST(Fractal, MoranDimension) {
  // log 4 / log(1/r) and 3 log 2 / log(1/r), mpmath
  EXPECT_NEAR(IFSMeasure::cantor_product(2, 0.45).similarity_dim(), 1.7361064491754327702, 1e-13);
  EXPECT_NEAR(IFSMeasure::cantor_product(3, 0.43).similarity_dim(), 2.4638806693158582688, 1e-13);
  EXPECT_NEAR(IFSMeasure::cantor_product(2, 0.35).similarity_dim(), 1.3205040442273863859, 1e-13);
  EXPECT_NEAR(IFSMeasure::lebesgue_cube(2).similarity_dim(), 2.0, 1e-13);
  EXPECT_LT(IFSMeasure::cantor_product(2, 0.45).moran_residual(), 1e-12);
}

TEST(Fractal, CantorTransformAgainstInfiniteProduct) {
  // e^(-pi i (xi1 + xi2)) prod_k cos(pi xi (1 - r) r^k), mpmath
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  struct Case {
    Vec xi;
    double re, im, sq;
  } cases[] = {
      {{3.1, -1.7, 0.0}, -0.010557599856533650737, 0.032492951270537480333, 0.0011672547970002026201},
      {{40.3, 7.9, 0.0}, 0.0006217592750511263786, -0.00045173455550641314563, 5.9064870475067888442e-7},
  };
  for (const auto& c : cases) {
    MuHat h = mu_hat(m, c.xi, mu_hat_depth(m, norm(c.xi, 2)));
    EXPECT_NEAR(h.value.real(), c.re, 1e-12);
    EXPECT_NEAR(h.value.imag(), c.im, 1e-12);
    EXPECT_NEAR(mu_hat_sq(m, c.xi), c.sq, 1e-13);
  }
}

TEST(Fractal, TruncationGuard) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  EXPECT_THROW(mu_hat(m, {1000.0, 0.0, 0.0}, 2), TruncationError);
}

TEST(Fractal, LebesgueTransform) {
  // prod_i e^(-pi i xi_i) sin(pi xi_i) / (pi xi_i)
  IFSMeasure m = IFSMeasure::lebesgue_cube(2);
  Vec xi{0.5, 1.5, 0.0};
  double expect = std::pow(std::sin(kPi * 0.5) / (kPi * 0.5) * std::sin(kPi * 1.5) / (kPi * 1.5), 2);
  EXPECT_NEAR(mu_hat_sq(m, xi), expect, 1e-12);
}

TEST(Fractal, BatchMatchesScalar) {
  IFSMeasure m = IFSMeasure::cantor_product(3, 0.43);
  std::vector<Vec> xs = {{1.0, 2.0, 3.0}, {-7.5, 0.25, 11.0}, {0.0, 0.0, 0.0}};
  std::vector<double> out(xs.size());
  mu_hat_sq_batch(m, xs.data(), out.data(), xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(out[i], mu_hat_sq(m, xs[i]), 1e-14);
  EXPECT_NEAR(out[2], 1.0, 1e-15);
}

TEST(Fractal, SamplesStayInSupport) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  auto pts = sample_points(m, 2000, 7);
  for (const auto& p : pts)
    for (int i = 0; i < 2; ++i) {
      EXPECT_GE(p[i], 0.0);
      EXPECT_LE(p[i], 1.0);
      // first-level gap (0.45, 0.55) is never hit
      EXPECT_FALSE(p[i] > 0.45 + 1e-12 && p[i] < 0.55 - 1e-12);
    }
}

TEST(Fractal, SamplingIsDeterministic) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  auto a = sample_points(m, 100, 42), b = sample_points(m, 100, 42), c = sample_points(m, 100, 43);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_EQ(m.sample(42, 17), a[17]);
}

TEST(Fractal, FrostmanSlope) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  FrostmanCertificate f = frostman_certificate(m, {0.01, 0.02, 0.04, 0.08, 0.16}, 200000, 5);
  EXPECT_TRUE(f.pass);
  EXPECT_NEAR(f.fit.exponent, 1.736, 0.15);
}

TEST(Fractal, AtomsAndValidation) {
  IFSMeasure a = IFSMeasure::atoms(2, {{0, 0, 0}, {1, 0, 0}}, {0.25, 0.75});
  ASSERT_TRUE(a.atoms().has_value());
  EXPECT_EQ(a.atoms()->size(), 2u);
  // |0.25 + 0.75 e^(-2 pi i xi1)|^2 at xi1 = 1/2 is 1/4
  EXPECT_NEAR(mu_hat_sq(a, {0.5, 0.0, 0.0}), 0.25, 1e-14);
  EXPECT_THROW(IFSMeasure::cantor_product(2, 0.6), DomainError);
  EXPECT_THROW(IFSMeasure::atoms(2, {{0, 0, 0}}, {0.5}), DomainError);
}
