#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "distlab/spectral_grid.hpp"

namespace distlab {

namespace {

constexpr const char* kMagic = "distlab-grid";
constexpr int kVersion = 1;

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw DomainError("grid file: unexpected end of file");
    return w;
  }
  void expect(const std::string& w) {
    std::string got = word();
    if (got != w) throw DomainError("grid file: expected '" + w + "', found '" + got + "'");
  }
  double real() {
    std::string w = word();
    char* end = nullptr;
    double v = std::strtod(w.c_str(), &end);
    if (end == w.c_str() || *end) throw DomainError("grid file: bad number '" + w + "'");
    return v;
  }
  long integer() {
    std::string w = word();
    char* end = nullptr;
    long v = std::strtol(w.c_str(), &end, 10);
    if (end == w.c_str() || *end) throw DomainError("grid file: bad integer '" + w + "'");
    return v;
  }
  std::size_t count() {
    long v = integer();
    if (v < 0) throw DomainError("grid file: negative count");
    return static_cast<std::size_t>(v);
  }
  std::string line() {
    std::string s;
    std::getline(in_ >> std::ws, s);
    return s;
  }
  std::vector<double> array(const std::string& name) {
    expect(name);
    std::size_t n = count();
    std::vector<double> v(n);
    for (auto& x : v) x = real();
    return v;
  }

 private:
  std::istream& in_;
};

void write_array(std::ostream& out, const char* name, const std::vector<double>& v) {
  out << name << ' ' << v.size();
  for (std::size_t i = 0; i < v.size(); ++i) out << (i % 8 == 0 ? "\n" : " ") << hex(v[i]);
  out << '\n';
}

const char* weight_name(BoundaryWeight w) { return w == BoundaryWeight::coarea ? "coarea" : "surface"; }

}  // namespace

void save_grid(const SpectralGrid& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("save_grid: cannot open " + path);
  out << kMagic << ' ' << kVersion << '\n';
  out << "convention " << g.convention << '\n';
  out << "measure " << g.measure_label << '\n';
  out << "body " << g.body_label << '\n';
  const GridParams& p = g.params;
  out << "params " << p.j_min << ' ' << p.j_max << ' ' << p.angular_level << ' ' << p.radial_nodes << ' '
      << hex(p.t_max) << ' ' << weight_name(p.weight) << '\n';
  out << "scalars " << g.dimension << ' ' << hex(g.similarity_dim) << ' ' << g.round << ' ' << hex(g.round_radius)
      << ' ' << g.fold << ' ' << g.cylindrical << ' ' << hex(g.low_cutoff) << ' ' << hex(g.profile_du) << ' '
      << hex(g.envelope_constant) << ' ' << hex(g.round_check_error) << ' ' << g.node_count << '\n';
  const RateFit& f = g.energy_fit;
  out << "fit " << hex(f.exponent) << ' ' << hex(f.constant) << ' ' << hex(f.residual) << ' '
      << hex(f.predicted_exponent) << ' ' << hex(f.tolerance) << ' ' << hex(f.octaves) << ' ' << f.points << ' '
      << f.pass << '\n';
  write_array(out, "rho", g.rho);
  write_array(out, "radial_w", g.radial_w);
  write_array(out, "angular_mass", g.angular_mass);
  out << "shells " << g.shells.size() << '\n';
  for (const auto& s : g.shells) {
    out << "shell " << s.j << ' ' << hex(s.lo) << ' ' << hex(s.hi) << ' ' << s.begin << ' ' << s.end << ' '
        << hex(s.volume) << ' ' << hex(s.energy) << ' ' << s.boundary_level << '\n';
    std::vector<double> dirs;
    for (const auto& v : s.directions) dirs.insert(dirs.end(), v.begin(), v.end());
    write_array(out, "directions", dirs);
    write_array(out, "direction_weights", s.direction_weights);
    write_array(out, "mu_sq", s.mu_sq);
    out << "profiles " << s.profiles.size() << '\n';
    for (const auto& pr : s.profiles) write_array(out, "profile", pr);
  }
  out << "end\n";
  if (!out) throw DomainError("save_grid: write failed for " + path);
}

SpectralGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("load_grid: cannot open " + path);
  Reader r(in);
  r.expect(kMagic);
  if (r.integer() != kVersion) throw DomainError("load_grid: unsupported format version");
  SpectralGrid g;
  r.expect("convention");
  g.convention = r.line();
  if (g.convention != kFourierConvention) throw DomainError("load_grid: Fourier convention mismatch");
  r.expect("measure");
  g.measure_label = r.line();
  r.expect("body");
  g.body_label = r.line();
  r.expect("params");
  GridParams& p = g.params;
  p.j_min = static_cast<int>(r.integer());
  p.j_max = static_cast<int>(r.integer());
  p.angular_level = static_cast<int>(r.integer());
  p.radial_nodes = static_cast<int>(r.integer());
  p.t_max = r.real();
  std::string w = r.word();
  if (w != "coarea" && w != "surface") throw DomainError("load_grid: bad weight " + w);
  p.weight = w == "coarea" ? BoundaryWeight::coarea : BoundaryWeight::surface;
  r.expect("scalars");
  g.dimension = static_cast<int>(r.integer());
  g.similarity_dim = r.real();
  g.round = r.integer() != 0;
  g.round_radius = r.real();
  g.fold = static_cast<int>(r.integer());
  g.cylindrical = r.integer() != 0;
  g.low_cutoff = r.real();
  g.profile_du = r.real();
  g.envelope_constant = r.real();
  g.round_check_error = r.real();
  g.node_count = r.count();
  r.expect("fit");
  RateFit& f = g.energy_fit;
  f.exponent = r.real();
  f.constant = r.real();
  f.residual = r.real();
  f.predicted_exponent = r.real();
  f.tolerance = r.real();
  f.octaves = r.real();
  f.points = static_cast<int>(r.integer());
  f.pass = r.integer() != 0;
  g.rho = r.array("rho");
  g.radial_w = r.array("radial_w");
  g.angular_mass = r.array("angular_mass");
  if (g.radial_w.size() != g.rho.size() || g.angular_mass.size() != g.rho.size())
    throw DomainError("load_grid: radial arrays differ in length");
  r.expect("shells");
  std::size_t ns = r.count();
  for (std::size_t i = 0; i < ns; ++i) {
    GridShell s;
    r.expect("shell");
    s.j = static_cast<int>(r.integer());
    s.lo = r.real();
    s.hi = r.real();
    s.begin = r.count();
    s.end = r.count();
    s.volume = r.real();
    s.energy = r.real();
    s.boundary_level = static_cast<int>(r.integer());
    if (s.begin > s.end || s.end > g.rho.size()) throw DomainError("load_grid: shell node range out of bounds");
    std::vector<double> dirs = r.array("directions");
    if (dirs.size() % 3) throw DomainError("load_grid: direction array not a multiple of 3");
    for (std::size_t k = 0; k < dirs.size(); k += 3) s.directions.push_back({dirs[k], dirs[k + 1], dirs[k + 2]});
    s.direction_weights = r.array("direction_weights");
    s.mu_sq = r.array("mu_sq");
    if (s.direction_weights.size() != s.directions.size() ||
        s.mu_sq.size() != s.directions.size() * (s.end - s.begin))
      throw DomainError("load_grid: shell arrays inconsistent");
    r.expect("profiles");
    std::size_t np = r.count();
    if (np != 0 && np != s.directions.size()) throw DomainError("load_grid: profile count mismatch");
    for (std::size_t k = 0; k < np; ++k) s.profiles.push_back(r.array("profile"));
    g.shells.push_back(std::move(s));
  }
  r.expect("end");
  return g;
}

bool grid_matches(const SpectralGrid& g, const IFSMeasure& measure, const ConvexBody& body, const GridParams& p) {
  const GridParams& q = g.params;
  return g.convention == kFourierConvention && g.measure_label == measure.describe() &&
         g.body_label == body.describe() && g.dimension == body.dimension() && q.j_min == p.j_min &&
         q.j_max == p.j_max && q.angular_level == p.angular_level && q.radial_nodes == p.radial_nodes &&
         q.t_max == p.t_max && q.weight == p.weight;
}

}  // namespace distlab
