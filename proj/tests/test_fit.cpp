#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "distlab/fit.hpp"
#include "distlab/types.hpp"

using namespace distlab;

TEST(Fit, ExactPowerLaw) {
  std::vector<double> x, y;
  for (int i = 0; i < 8; ++i) {
    x.push_back(std::exp2(i));
    y.push_back(3.0 * std::pow(x.back(), -0.5));
  }
  RateFit f = fit_power_law(x, y);
  EXPECT_NEAR(f.exponent, -0.5, 1e-13);
  EXPECT_NEAR(f.constant, 3.0, 1e-12);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_NEAR(f.octaves, 7.0, 1e-14);
}

TEST(Fit, NoisyPowerLaw) {
  std::mt19937_64 gen(12345);
  std::normal_distribution<double> n(0.0, 0.01);
  std::vector<double> x, y;
  for (int i = 0; i < 20; ++i) {
    x.push_back(std::pow(1.5, i));
    y.push_back(2.0 * std::pow(x.back(), 0.7) * (1.0 + n(gen)));
  }
  EXPECT_NEAR(fit_power_law(x, y).exponent, 0.7, 0.02);
}

TEST(Fit, ConstantData) {
  std::vector<double> x{1, 2, 3, 4, 5}, y(5, 4.2);
  EXPECT_NEAR(fit_power_law(x, y).exponent, 0.0, 1e-14);
}

TEST(Fit, Rejections) {
  EXPECT_THROW(fit_power_law({1, 2, 3, 4}, {1, 2, 3, 4}), FitError);
  EXPECT_THROW(fit_power_law({1, 2, 3, 4, 5}, {1, 2, -3, 4, 5}), FitError);
  EXPECT_THROW(fit_power_law({1, 2, 3, 4, 5}, {1, 2, 3}), FitError);
}
