#pragma once

#include <string>
#include <vector>

namespace distlab {

// Result of a log-log least squares fit y ~ constant * x^exponent.
struct RateFit {
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;  // rms of the log residuals
  double predicted_exponent = 0.0;
  double tolerance = 0.0;
  double octaves = 0.0;  // log2(x_max / x_min)
  int points = 0;
  bool pass = false;
};

// Needs >= 5 points, all positive.
RateFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace distlab
