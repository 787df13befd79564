#include <gtest/gtest.h>

#include "distlab/fourier.hpp"

using namespace distlab;

// Oracle values: mpmath at 30 digits.
namespace {
struct RadialCase {
  double r, circle, sphere;
};
const RadialCase kRadial[] = {
    {0.3, 1.82566880075696922, 6.3403767753010241925},
    {1.7, -1.3740193840612519496, -1.1188900191707688362},
    {12.5, -0.39935888239364503426, 0.0},
    {63.2, 0.22419287065233471061, 0.030096725199213893916},
};
}  // namespace

TEST(Fourier, CircleMatchesBessel) {
  ConvexBody b = ConvexBody::ball(2);
  for (const auto& c : kRadial) {
    Vec xi{c.r * 0.6, c.r * 0.8, 0.0};
    cdouble v = sigma_hat(b, xi, resolving_level(b, c.r));
    EXPECT_NEAR(v.real(), c.circle, 1e-9) << c.r;
    EXPECT_NEAR(v.imag(), 0.0, 1e-9);
  }
}

TEST(Fourier, SphereMatchesSinc) {
  ConvexBody b = ConvexBody::ball(3);
  for (const auto& c : kRadial) {
    if (c.r > 20) continue;  // kept fast; the acceptance suite covers |xi| <= 64
    Vec xi{0.0, c.r * 0.6, c.r * 0.8};
    cdouble v = sigma_hat(b, xi, resolving_level(b, c.r));
    EXPECT_NEAR(v.real(), c.sphere, 1e-8) << c.r;
  }
}

TEST(Fourier, RoundClosedForms) {
  for (const auto& c : kRadial) {
    EXPECT_NEAR(round_sigma_hat(2, 1.0, c.r, BoundaryWeight::surface), c.circle, 1e-13);
    EXPECT_NEAR(round_sigma_hat(3, 1.0, c.r, BoundaryWeight::surface), c.sphere, 1e-13);
  }
  // radius 2 dilation: a * 2 pi J0(2 pi a u), times a more for the coarea weight
  EXPECT_NEAR(round_sigma_hat(2, 2.0, 0.85, BoundaryWeight::surface), 2.0 * kRadial[1].circle, 1e-13);
  EXPECT_NEAR(round_sigma_hat(2, 2.0, 0.85, BoundaryWeight::coarea), 4.0 * kRadial[1].circle, 1e-13);
}

TEST(Fourier, EllipseAgainstArcLengthIntegral) {
  ConvexBody e = ConvexBody::ellipsoid({2.0, 1.0});
  cdouble a = sigma_hat(e, {0.7, 0.4, 0.0}, 6);
  EXPECT_NEAR(a.real(), -0.72378950972315503065, 1e-10);
  EXPECT_NEAR(a.imag(), 0.0, 1e-10);
  Vec xi{3.2, -1.1, 0.0};
  cdouble b = sigma_hat(e, xi, resolving_level(e, norm(xi, 2)));
  EXPECT_NEAR(b.real(), -0.53662992868539451349, 1e-10);
}

TEST(Fourier, ResolutionRuleEnforced) {
  ConvexBody b = ConvexBody::ball(2);
  BoundaryRule rule(b, 2);
  double f = rule.max_frequency();
  EXPECT_NO_THROW(rule.transform({0.99 * f, 0.0, 0.0}));
  EXPECT_THROW(rule.transform({1.5 * f, 0.0, 0.0}), ResolutionError);
}

TEST(Fourier, ScaledJetMatchesRoundDerivative) {
  // d/dt [t 2 pi J0(2 pi t u)] against the closed form derivative
  ConvexBody b = ConvexBody::ball(2);
  BoundaryRule rule(b, resolving_level(b, 20.0));
  Vec xi{6.0, 8.0, 0.0};
  double t = 1.3, u = 10.0;
  double expect = round_sigma_hat(2, 1.0, t * u, BoundaryWeight::surface) +
                  t * u * round_sigma_hat_derivative(2, 1.0, t * u, 1, BoundaryWeight::surface);
  EXPECT_NEAR(rule.scaled_jet(xi, t, 1).real(), expect, 1e-9);
  EXPECT_NEAR(rule.scaled_jet(xi, t, 0).real(), t * round_sigma_hat(2, 1.0, t * u, BoundaryWeight::surface), 1e-10);
}

TEST(Fourier, BatchEqualsSingle) {
  ConvexBody e = ConvexBody::ellipsoid({1.5, 1.0, 0.8});
  BoundaryRule rule(e, 3);
  std::vector<Vec> xs = {{0.5, 0.2, -0.1}, {1.0, 0.0, 0.3}};
  auto v = rule.transform_batch(xs);
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(std::abs(v[i] - rule.transform(xs[i])), 0.0, 1e-12);
}

TEST(Fourier, DecayExponentOfDisk) {
  ConvexBody b = ConvexBody::ball(2);
  DecayCertificate c = decay_certificate(b, {4, 8, 16, 32, 64}, default_directions(2, 4));
  EXPECT_NEAR(c.fit.exponent, -0.5, 0.05);
  EXPECT_TRUE(c.fit.pass);
}

TEST(Fourier, MollifierIsGaussian) {
  EXPECT_NEAR(mollifier_hat(0.1, 3.0), std::exp(-kPi * 0.09), 1e-15);
  EXPECT_DOUBLE_EQ(mollifier_hat(0.1, 0.0), 1.0);
}
