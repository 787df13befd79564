#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace distlab::interp {

inline constexpr int kStencil = 8;

// Lagrange interpolation on a uniform even table f(k h), k >= 0, mirrored
// through 0 for negative indices.
inline double lagrange_even(const std::vector<double>& tab, double h, double x) {
  x = std::abs(x);
  double pos = x / h;
  long base = static_cast<long>(std::floor(pos)) - kStencil / 2 + 1;
  if (base + kStencil > static_cast<long>(tab.size()))
    throw std::logic_error("interpolation table too short");
  double s = pos - static_cast<double>(base);
  // l_i(s) = prod_{k != i} (s - k) / (i - k), via prefix and suffix products
  static const auto denom = [] {
    std::array<double, kStencil> dn{};
    for (int i = 0; i < kStencil; ++i) {
      double p = 1.0;
      for (int k = 0; k < kStencil; ++k)
        if (k != i) p *= static_cast<double>(i - k);
      dn[i] = 1.0 / p;
    }
    return dn;
  }();
  double pre[kStencil + 1], suf[kStencil + 1];
  pre[0] = 1.0;
  suf[kStencil] = 1.0;
  for (int k = 0; k < kStencil; ++k) pre[k + 1] = pre[k] * (s - k);
  for (int k = kStencil - 1; k >= 0; --k) suf[k] = suf[k + 1] * (s - k);
  double out = 0.0;
  for (int i = 0; i < kStencil; ++i)
    out += pre[i] * suf[i + 1] * denom[i] * tab[static_cast<std::size_t>(std::labs(base + i))];
  return out;
}

}  // namespace distlab::interp
