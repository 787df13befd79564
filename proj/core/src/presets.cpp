#include <map>

#include "distlab/experiment.hpp"

namespace distlab {

namespace {

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> p = {
      {"theorem1-d2",
       "# Cantor product, ratio 0.45, against the Euclidean disk\n"
       "measure.kind = cantor_product\n"
       "measure.dimension = 2\n"
       "measure.ratio = 0.45\n"
       "body.kind = ball\n"
       "body.params = 1\n"
       "grid.j_max = 11\n"
       "certificates.list = decay, energy, identity, remainder, mass, interval, coverage, holder, derivative\n"
       "identity.gamma = 1.7, 1.8, 1.9\n"},
      {"theorem1-d3",
       "# Cantor product, ratio 0.43, against the Euclidean ball in R^3\n"
       "measure.kind = cantor_product\n"
       "measure.dimension = 3\n"
       "measure.ratio = 0.43\n"
       "body.kind = ball\n"
       "body.params = 1\n"
       "grid.j_max = 11\n"
       "certificates.list = decay, energy, identity, remainder, mass, interval, coverage, holder, derivative\n"
       "identity.gamma = 1.5, 2.0, 2.5\n"},
      {"star-shaped-remark",
       "# smooth star body with positive curvature, non-round, so the grid\n"
       "# integrates sampled boundary transforms; j_max is kept low for time\n"
       "measure.kind = cantor_product\n"
       "measure.dimension = 2\n"
       "measure.ratio = 0.45\n"
       "body.kind = star\n"
       "body.params = 1.5, 0.06, 4\n"
       "grid.j_max = 5\n"
       "eps.list = 0.5, 0.25, 0.125, 0.0625, 0.03125\n"
       "agreement.eps = 0.03125\n"
       "certificates.list = decay, energy, remainder, agreement, mass, interval, coverage\n"},
      {"below-threshold-d2",
       "# s = log 4 / log(1/0.35) < 3/2: the remainder bound is vacuous\n"
       "measure.kind = cantor_product\n"
       "measure.dimension = 2\n"
       "measure.ratio = 0.35\n"
       "body.kind = ball\n"
       "body.params = 1\n"
       "grid.j_max = 9\n"
       "certificates.list = energy, remainder\n"},
  };
  return p;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> n;
  for (const auto& [k, v] : presets()) n.push_back(k);
  return n;
}

std::string preset_text(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) {
    std::string known;
    for (const auto& k : preset_names()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return it->second;
}

}  // namespace distlab
