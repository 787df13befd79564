#pragma once

#include <vector>

namespace distlab {

// Gauss-Legendre rule on [-1, 1], nodes in decreasing order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached per n; safe to call from several threads.
const GaussRule& gauss_legendre(int n);

struct RadialNodes {
  std::vector<double> x;
  std::vector<double> w;
};

// Composite rule on [a, b]: `panels` equal panels with an n-point rule each.
void append_composite(RadialNodes& out, double a, double b, int panels, int n);

}  // namespace distlab
