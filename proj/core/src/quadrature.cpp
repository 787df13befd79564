#include "distlab/quadrature.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <map>
#include <memory>
#include <mutex>

#include "distlab/types.hpp"

namespace distlab {

namespace {

GaussRule build_rule(int n) {
  std::vector<double> pos = boost::math::legendre_p_zeros<double>(n);
  GaussRule rule;
  auto weight = [n](double x) {
    double dp = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  // pos holds the non-negative zeros in increasing order.
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    rule.nodes.push_back(*it);
    rule.weights.push_back(weight(*it));
  }
  std::size_t k = rule.nodes.size();
  std::size_t start = (n % 2 == 1) ? k - 1 : k;
  for (std::size_t i = start; i-- > 0;) {
    rule.nodes.push_back(-rule.nodes[i]);
    rule.weights.push_back(rule.weights[i]);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<GaussRule>(build_rule(n));
  const GaussRule& ref = *rule;
  cache.emplace(n, std::move(rule));
  return ref;
}

void append_composite(RadialNodes& out, double a, double b, int panels, int n) {
  const GaussRule& g = gauss_legendre(n);
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double lo = a + h * p;
    double mid = lo + 0.5 * h;
    // increasing order within the panel
    for (std::size_t i = g.nodes.size(); i-- > 0;) {
      out.x.push_back(mid + 0.5 * h * g.nodes[i]);
      out.w.push_back(0.5 * h * g.weights[i]);
    }
  }
}

}  // namespace distlab
