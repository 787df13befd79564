#include <gtest/gtest.h>

#include <algorithm>

#include "distlab/oracle.hpp"

using namespace distlab;

TEST(Oracle, ChordLawOfCircle) {
  // P(|x - y| <= t) = (2 / pi) asin(t / 2) on the unit circle, mpmath
  UniformCircle c;
  ConvexBody b = ConvexBody::ball(2);
  auto d = pair_distances(c, b, 200000, 9);
  std::sort(d.begin(), d.end());
  const double ts[] = {0.5, 1.0, 1.9};
  const double cdf[] = {0.16086124651033248754, 0.33333333333333333333, 0.7978347517914801703};
  for (int i = 0; i < 3; ++i) {
    double emp = double(std::upper_bound(d.begin(), d.end(), ts[i]) - d.begin()) / d.size();
    EXPECT_NEAR(emp, cdf[i], 4.0 * std::sqrt(cdf[i] * (1 - cdf[i]) / d.size()));
  }
}

TEST(Oracle, ExhaustiveAtoms) {
  // two atoms of mass 1/2 at distance 1: nu_eps(1) = (1/2) / (2 eps)
  IFSMeasure a = IFSMeasure::atoms(2, {{0, 0, 0}, {1, 0, 0}}, {0.5, 0.5});
  ConvexBody b = ConvexBody::ball(2);
  DirectEstimate e = nu_eps_direct_batch(a, b, {1.0}, 0.1, 1000, 3).front();
  EXPECT_TRUE(e.exhaustive);
  EXPECT_NEAR(e.value, 2.5, 1e-14);
  EXPECT_EQ(e.standard_error, 0.0);
  WeightedDistances w = exhaustive_distances(a, b);
  EXPECT_EQ(w.distance.size(), 4u);
  // the single-t estimator always samples pairs
  DirectEstimate mc = nu_eps_direct(a, b, 1.0, 0.1, 100000, 3);
  EXPECT_FALSE(mc.exhaustive);
  EXPECT_NEAR(mc.value, 2.5, 4.0 * mc.standard_error);
}

TEST(Oracle, BatchMatchesSingle) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  ConvexBody b = ConvexBody::ball(2);
  std::vector<double> ts{0.3, 0.6};
  auto v = nu_eps_direct_batch(m, b, ts, 0.02, 50000, 11);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    DirectEstimate s = nu_eps_direct(m, b, ts[i], 0.02, 50000, 11);
    EXPECT_DOUBLE_EQ(v[i].value, s.value);
    EXPECT_GT(v[i].standard_error, 0.0);
  }
}

TEST(Oracle, HistogramSumsToOne) {
  IFSMeasure m = IFSMeasure::cantor_product(2, 0.45);
  PairSampleStats h = distance_histogram(m, ConvexBody::ball(2), 100000, 64, 5, std::sqrt(2.0));
  double s = 0.0;
  for (double x : h.bin_masses) s += x;
  EXPECT_NEAR(s + h.overflow, 1.0, 1e-12);
  EXPECT_EQ(h.bin_edges.size(), 65u);
  EXPECT_THROW(distance_histogram(m, ConvexBody::ball(2), 100, 8, 5, 1.0), DomainError);
}

TEST(Oracle, CoverageFindsGaps) {
  // atoms at distance exactly 1 leave (0, 1) uncovered except the diagonal
  IFSMeasure a = IFSMeasure::atoms(2, {{0, 0, 0}, {1, 0, 0}}, {0.5, 0.5});
  Coverage c = coverage_check(a, ConvexBody::ball(2), 0.2, 1.2, 0.1, 1000, 1);
  EXPECT_FALSE(c.covered);
  EXPECT_EQ(c.cells, 10u);
  Coverage s = coverage_check(IFSMeasure::lebesgue_cube(2), ConvexBody::ball(2), 0.1, 1.0, 0.01, 200000, 1);
  EXPECT_TRUE(s.covered);
}

TEST(Oracle, GaugeDistancesUseBody) {
  // for the dilated ball 2B gauge distances halve
  UniformCircle c;
  auto d1 = pair_distances(c, ConvexBody::ball(2), 1000, 4);
  auto d2 = pair_distances(c, ConvexBody::ball(2, 2.0), 1000, 4);
  for (std::size_t i = 0; i < d1.size(); ++i) EXPECT_NEAR(d2[i], 0.5 * d1[i], 1e-15);
}
