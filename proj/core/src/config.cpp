#include "distlab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "distlab/density.hpp"

namespace distlab {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_number(const std::string& key, const std::string& s) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(key + ": '" + s + "' is not a finite number");
  return v;
}

}  // namespace

const std::map<std::string, std::string>& Config::defaults() {
  static const std::map<std::string, std::string> d = {
      {"measure.kind", "cantor_product"},
      {"measure.dimension", "2"},
      {"measure.ratio", "0.45"},
      {"measure.points", ""},
      {"measure.weights", ""},
      {"body.kind", "ball"},
      {"body.params", "1"},
      {"grid.j_max", "11"},
      {"grid.angular_level", "10"},
      {"grid.radial_nodes", "16"},
      {"grid.t_max", "auto"},
      {"grid.cache", ""},
      {"tgrid.points", "256"},
      {"eps.list", "0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625,0.001953125"},
      {"certificates.list", ""},
      {"seeds.agreement", "1001"},
      {"seeds.coverage", "1002"},
      {"seeds.identity", "1003"},
      {"seeds.derivative", "1004"},
      {"pairs.agreement", "1000000"},
      {"pairs.coverage", "10000000"},
      {"pairs.identity", "1000000"},
      {"tolerance.rate", "0.1"},
      {"tolerance.identity", "0.05"},
      {"tolerance.mass", "0.02"},
      {"tolerance.derivative", "1e-6"},
      {"decay.radii", "4,8,16,32,64,128,256"},
      {"decay.directions", "auto"},
      {"decay.two_sided", "false"},
      {"decay.curvature_level", "8"},
      {"holder.alpha", "0.1"},
      {"holder.octaves", "4"},
      {"holder.growth_limit", "2"},
      {"interval.threshold", "0.05"},
      {"interval.min_length", "0"},
      {"coverage.cells", "100"},
      {"identity.gamma", "1.7,1.8,1.9"},
      {"derivative.order", "1"},
      {"derivative.samples", "100"},
      {"derivative.radii", "4,8,16,32,64"},
      {"agreement.eps", "0.015625"},
      {"histogram.bins", "256"},
      {"output.dir", ""},
  };
  return d;
}

Config Config::parse(const std::string& text, const std::string& source) {
  Config c;
  c.source_ = source;
  std::stringstream ss(text);
  std::string line;
  int no = 0;
  while (std::getline(ss, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    std::string where = source + ":" + std::to_string(no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'section.key = value'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string::npos) throw ConfigError(where + "key '" + key + "' has no section");
    if (!defaults().count(key)) throw ConfigError(where + "unknown key '" + key + "'");
    if (c.values_.count(key)) throw ConfigError(where + "repeated key '" + key + "'");
    c.values_[key] = value;
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  auto d = defaults().find(key);
  if (d == defaults().end()) throw ConfigError("unknown key '" + key + "'");
  return d->second;
}

double Config::number(const std::string& key) const { return parse_number(key, get(key)); }

long Config::integer(const std::string& key) const {
  double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 9.0e15) throw ConfigError(key + ": expected an integer");
  return static_cast<long>(v);
}

bool Config::boolean(const std::string& key) const {
  std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false");
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : split_list(get(key))) out.push_back(parse_number(key, w));
  return out;
}

std::vector<std::string> Config::words(const std::string& key) const { return split_list(get(key)); }

std::vector<std::pair<std::string, std::string>> Config::effective() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : defaults()) out.emplace_back(k, get(k));
  return out;
}

const char* certificate_name(Certificate c) {
  switch (c) {
    case Certificate::decay: return "decay";
    case Certificate::energy: return "energy";
    case Certificate::identity: return "identity";
    case Certificate::remainder: return "remainder";
    case Certificate::agreement: return "agreement";
    case Certificate::mass: return "mass";
    case Certificate::interval: return "interval";
    case Certificate::coverage: return "coverage";
    case Certificate::holder: return "holder";
    case Certificate::derivative: return "derivative";
  }
  return "?";
}

const char* certificate_claim(Certificate c) {
  switch (c) {
    case Certificate::decay: return "Lemma.stationary.decay";
    case Certificate::energy: return "Lemma.energy.dyadic";
    case Certificate::identity: return "Lemma.energy.identity";
    case Certificate::remainder: return "Thm1.ii.remainder";
    case Certificate::agreement: return "Thm1.ii.agreement";
    case Certificate::mass: return "Thm1.i.mass";
    case Certificate::interval: return "Thm1.iii.interval";
    case Certificate::coverage: return "Thm1.iii.coverage";
    case Certificate::holder: return "Thm1.iv.holder";
    case Certificate::derivative: return "Thm1.iii.smoothness";
  }
  return "?";
}

std::vector<Certificate> all_certificates() {
  return {Certificate::decay,     Certificate::energy, Certificate::identity, Certificate::remainder,
          Certificate::agreement, Certificate::mass,   Certificate::interval, Certificate::coverage,
          Certificate::holder,    Certificate::derivative};
}

bool ExperimentConfig::wants(Certificate c) const {
  return std::find(certificates.begin(), certificates.end(), c) != certificates.end();
}

std::string default_output_dir() {
  const char* env = std::getenv("DISTLAB_OUT");
  return env && *env ? env : "distlab-out";
}

ExperimentConfig validate_config(const Config& cfg) {
  ExperimentConfig e;
  e.raw = cfg;
  auto positive_int = [&](const std::string& key, long lo, long hi) {
    long v = cfg.integer(key);
    if (v < lo || v > hi)
      throw ConfigError(key + ": must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
    return v;
  };

  const int d = static_cast<int>(positive_int("measure.dimension", 2, 3));
  try {
    std::string kind = cfg.get("measure.kind");
    if (kind == "cantor_product") {
      e.measure = IFSMeasure::cantor_product(d, cfg.number("measure.ratio"));
    } else if (kind == "lebesgue_cube") {
      e.measure = IFSMeasure::lebesgue_cube(d);
    } else if (kind == "atoms") {
      auto flat = cfg.numbers("measure.points");
      auto w = cfg.numbers("measure.weights");
      if (flat.empty() || flat.size() % static_cast<std::size_t>(d))
        throw ConfigError("measure.points: need a multiple of " + std::to_string(d) + " coordinates");
      std::vector<Vec> pts;
      for (std::size_t i = 0; i < flat.size(); i += static_cast<std::size_t>(d)) {
        Vec p{};
        for (int c = 0; c < d; ++c) p[c] = flat[i + static_cast<std::size_t>(c)];
        pts.push_back(p);
      }
      if (w.empty()) w.assign(pts.size(), 1.0 / static_cast<double>(pts.size()));
      e.measure = IFSMeasure::atoms(d, pts, w);
    } else {
      throw ConfigError("measure.kind: unknown kind '" + kind + "' (cantor_product, lebesgue_cube, atoms)");
    }
    e.body = ConvexBody::from_spec(cfg.get("body.kind"), d, cfg.numbers("body.params"));
  } catch (const DomainError& ex) {
    throw ConfigError(std::string("invalid measure or body: ") + ex.what());
  }

  e.diameter = gauge_diameter(e.measure, e.body);
  e.grid.j_max = static_cast<int>(positive_int("grid.j_max", 1, 14));
  e.grid.angular_level = static_cast<int>(positive_int("grid.angular_level", 1, 64));
  e.grid.radial_nodes = static_cast<int>(positive_int("grid.radial_nodes", 1, 4096));
  if (cfg.get("grid.t_max") == "auto") {
    e.grid.t_max = e.diameter * (1.0 + 1e-9);
  } else {
    e.grid.t_max = cfg.number("grid.t_max");
    if (!(e.grid.t_max >= e.diameter))
      throw ConfigError("grid.t_max: must be at least the gauge diameter " + std::to_string(e.diameter));
  }
  e.grid_cache = cfg.get("grid.cache");
  e.t_points = static_cast<int>(positive_int("tgrid.points", 16, 1 << 16));

  e.eps = cfg.numbers("eps.list");
  for (double v : e.eps)
    if (!(v > 0.0)) throw ConfigError("eps.list: entries must be positive");
  std::sort(e.eps.begin(), e.eps.end(), std::greater<>());

  for (const auto& w : cfg.words("certificates.list")) {
    bool found = false;
    for (Certificate c : all_certificates())
      if (w == certificate_name(c)) {
        if (!e.wants(c)) e.certificates.push_back(c);
        found = true;
      }
    if (!found) throw ConfigError("certificates.list: unknown certificate '" + w + "'");
  }
  if (e.wants(Certificate::coverage) && !e.wants(Certificate::interval))
    e.certificates.push_back(Certificate::interval);

  e.seed_agreement = static_cast<std::uint64_t>(positive_int("seeds.agreement", 0, 1L << 53));
  e.seed_coverage = static_cast<std::uint64_t>(positive_int("seeds.coverage", 0, 1L << 53));
  e.seed_identity = static_cast<std::uint64_t>(positive_int("seeds.identity", 0, 1L << 53));
  e.seed_derivative = static_cast<std::uint64_t>(positive_int("seeds.derivative", 0, 1L << 53));
  e.pairs_agreement = static_cast<std::size_t>(positive_int("pairs.agreement", 10000, 100000000));
  e.pairs_coverage = static_cast<std::size_t>(positive_int("pairs.coverage", 1, 100000000));
  e.pairs_identity = static_cast<std::size_t>(positive_int("pairs.identity", 16, 100000000));

  e.tol_rate = cfg.number("tolerance.rate");
  e.tol_identity = cfg.number("tolerance.identity");
  e.tol_mass = cfg.number("tolerance.mass");
  e.tol_derivative = cfg.number("tolerance.derivative");
  for (double t : {e.tol_rate, e.tol_identity, e.tol_mass, e.tol_derivative})
    if (!(t > 0.0)) throw ConfigError("tolerances must be positive");

  e.decay_radii = cfg.numbers("decay.radii");
  if (cfg.get("decay.directions") == "auto") e.decay_directions = d == 2 ? 16 : 6;
  else e.decay_directions = static_cast<int>(positive_int("decay.directions", 1, 4096));
  e.decay_two_sided = cfg.boolean("decay.two_sided");
  e.curvature_level = static_cast<int>(positive_int("decay.curvature_level", 1, 14));
  e.holder_alpha = cfg.number("holder.alpha");
  if (!(e.holder_alpha >= 0.0 && e.holder_alpha < 1.0)) throw ConfigError("holder.alpha: must lie in [0, 1)");
  e.holder_octaves = static_cast<int>(positive_int("holder.octaves", 1, 10));
  e.holder_growth = cfg.number("holder.growth_limit");
  e.interval_threshold = cfg.number("interval.threshold");
  if (!(e.interval_threshold > 0.0)) throw ConfigError("interval.threshold: must be positive");
  e.interval_min_length = cfg.number("interval.min_length");
  e.coverage_cells = static_cast<int>(positive_int("coverage.cells", 1, 1 << 20));
  e.identity_gamma = cfg.numbers("identity.gamma");
  e.derivative_order = static_cast<int>(positive_int("derivative.order", 1, 3));
  e.derivative_samples = static_cast<int>(positive_int("derivative.samples", 1, 100000));
  e.derivative_radii = cfg.numbers("derivative.radii");
  e.agreement_eps = cfg.number("agreement.eps");
  if (!(e.agreement_eps > 0.0)) throw ConfigError("agreement.eps: must be positive");
  e.histogram_bins = static_cast<int>(positive_int("histogram.bins", 16, 1 << 20));
  e.output_dir = cfg.get("output.dir");

  // preconditions of the requested certificates
  auto octaves = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? std::log2(*hi / *lo) : 0.0;
  };
  if (e.wants(Certificate::remainder)) {
    if (e.eps.size() < 5) throw ConfigError("eps.list: the remainder fit needs at least 5 values");
    if (octaves(e.eps) < 4.0) throw ConfigError("eps.list: must span at least 4 octaves");
  }
  if (e.wants(Certificate::decay)) {
    if (e.decay_radii.size() < 5 || octaves(e.decay_radii) < 4.0)
      throw ConfigError("decay.radii: need at least 5 radii over 4 octaves");
    for (double r : e.decay_radii)
      if (!(r > 0.0)) throw ConfigError("decay.radii: must be positive");
  }
  if (e.wants(Certificate::derivative) && (e.derivative_radii.size() < 5 || octaves(e.derivative_radii) < 4.0))
    throw ConfigError("derivative.radii: need at least 5 radii over 4 octaves");
  if (e.wants(Certificate::identity)) {
    if (e.identity_gamma.empty()) throw ConfigError("identity.gamma: empty");
    for (double g : e.identity_gamma)
      if (!(g > 0.0 && g < d)) throw ConfigError("identity.gamma: each gamma must lie in (0, d)");
  }
  if (e.wants(Certificate::holder) && static_cast<double>(1 << e.holder_octaves) * 8.0 > e.t_points)
    throw ConfigError("holder.octaves: separations exceed the bulk of the t-grid");
  if (e.wants(Certificate::agreement) && 2.0 * e.agreement_eps >= e.diameter)
    throw ConfigError("agreement.eps: window wider than the distance range");
  return e;
}

}  // namespace distlab
