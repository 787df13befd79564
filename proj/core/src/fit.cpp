#include "distlab/fit.hpp"

#include <algorithm>
#include <cmath>

#include "distlab/types.hpp"

namespace distlab {

RateFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw FitError("fit_power_law: size mismatch");
  if (xs.size() < 5) throw FitError("fit_power_law: need at least 5 points");
  const std::size_t n = xs.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw FitError("fit_power_law: inputs must be positive and finite");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    sx += lx[i];
    sy += ly[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw FitError("fit_power_law: abscissae are all equal");
  RateFit f;
  f.exponent = sxy / sxx;
  double b = my - f.exponent * mx;
  f.constant = std::exp(b);
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ly[i] - (b + f.exponent * lx[i]);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  f.octaves = std::log2(*hi / *lo);
  f.points = static_cast<int>(n);
  return f;
}

}  // namespace distlab
