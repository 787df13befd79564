#include <gtest/gtest.h>

#include "distlab/geometry.hpp"

using namespace distlab;

TEST(Geometry, BallGaugeIsScaledNorm) {
  ConvexBody b = ConvexBody::ball(2, 2.0);
  EXPECT_NEAR(gauge_norm(b, {3.0, 4.0, 0.0}), 2.5, 1e-15);
  ConvexBody b3 = ConvexBody::ball(3);
  EXPECT_NEAR(gauge_norm(b3, {1.0, 2.0, 2.0}), 3.0, 1e-15);
}

TEST(Geometry, EllipseRadialAndGauge) {
  ConvexBody e = ConvexBody::ellipsoid({2.0, 1.0});
  EXPECT_NEAR(e.radial({1.0, 0.0, 0.0}), 2.0, 1e-14);
  EXPECT_NEAR(e.radial({0.0, 1.0, 0.0}), 1.0, 1e-14);
  EXPECT_NEAR(gauge_norm(e, {2.0, 1.0, 0.0}), std::sqrt(2.0), 1e-14);
  // sampled on a direction grid, so only close to the true extremes
  EXPECT_NEAR(e.r_min(), 1.0, 1e-5);
  EXPECT_NEAR(e.r_max(), 2.0, 1e-5);
}

TEST(Geometry, EllipseCurvatureMinimum) {
  // x^2/4 + y^2 = 1: curvature b/a^2 = 1/4 at (0, +-1)
  ConvexBody e = ConvexBody::ellipsoid({2.0, 1.0});
  CurvatureCertificate c = curvature_certificate(e, 6);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.min_curvature, 0.25, 1e-9);
  EXPECT_NEAR(std::abs(c.location[1]), 1.0, 1e-9);
}

TEST(Geometry, SphereCurvature) {
  ConvexBody b = ConvexBody::ball(3, 2.0);
  EXPECT_NEAR(gaussian_curvature(b, {0.0, 0.0, 1.0}), 0.25, 1e-12);
}

TEST(Geometry, NonconvexStarFailsCurvature) {
  ConvexBody s = ConvexBody::star(2, 1.5, 0.3, 4);
  CurvatureCertificate c = curvature_certificate(s, 6);
  EXPECT_FALSE(c.pass);
  EXPECT_LT(c.min_curvature, 0.0);
  EXPECT_EQ(s.kind(), BodyKind::star_shaped);
}

TEST(Geometry, MildStarPassesCurvature) {
  ConvexBody s = ConvexBody::star(2, 1.5, 0.06, 4);
  EXPECT_TRUE(curvature_certificate(s, 6).pass);
}

TEST(Geometry, AnalyticJetMatchesFiniteDifference) {
  ConvexBody p = ConvexBody::perturbed_ball(2, 0.05, 4);
  for (double th : {0.1, 0.7, 2.3}) {
    PolarJet a = p.polar_jet(th), f = p.polar_jet_fd(th, 1e-4);
    EXPECT_NEAR(a.dr, f.dr, 1e-7);
    EXPECT_NEAR(a.d2r, f.d2r, 1e-5);
  }
  ConvexBody p3 = ConvexBody::perturbed_ball(3, 0.05);
  Vec x{0.3, -0.5, 0.8};
  GaugeJet a = p3.gauge_jet(x), f = p3.gauge_jet_fd(x, 1e-5);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(a.grad[i], f.grad[i], 1e-8);
}

TEST(Geometry, PerimeterOfEllipse) {
  // complete elliptic integral: 4 a E(1 - b^2/a^2) for a = 2, b = 1 (mpmath)
  ConvexBody e = ConvexBody::ellipsoid({2.0, 1.0});
  EXPECT_NEAR(adaptive_perimeter(e), 9.6884482205476761, 1e-10);
}

TEST(Geometry, QuadratureIntegratesSurfaceArea) {
  ConvexBody b3 = ConvexBody::ball(3);
  double s = 0.0;
  for (const auto& n : boundary_quadrature(b3, 4)) s += n.w;
  EXPECT_NEAR(s, 4.0 * kPi, 1e-10);
}

TEST(Geometry, RejectsBadSpecs) {
  EXPECT_THROW(ConvexBody::ball(2, -1.0), DomainError);
  EXPECT_THROW(ConvexBody::star(2, 1.5, 0.6, 4), DomainError);
  EXPECT_THROW(ConvexBody::from_spec("cube", 2, {1.0}), DomainError);
}
