#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "distlab/fractal.hpp"
#include "distlab/geometry.hpp"
#include "distlab/spectral_grid.hpp"

namespace distlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat `section.key = value` text. '#' starts a comment; lists are comma
// separated. Unknown or repeated keys are errors.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  // Value given in the text, else the documented default.
  std::string get(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  // Every known key with its effective value, sorted.
  std::vector<std::pair<std::string, std::string>> effective() const;
  const std::string& source() const { return source_; }

  static const std::map<std::string, std::string>& defaults();

 private:
  std::map<std::string, std::string> values_;
  std::string source_;
};

enum class Certificate { decay, energy, identity, remainder, agreement, mass, interval, coverage, holder, derivative };

const char* certificate_name(Certificate c);
const char* certificate_claim(Certificate c);
std::vector<Certificate> all_certificates();

struct ExperimentConfig {
  Config raw;
  IFSMeasure measure = IFSMeasure::cantor_product(2, 0.45);
  ConvexBody body = ConvexBody::ball(2);
  GridParams grid;
  std::string grid_cache;
  double diameter = 0.0;  // gauge diameter of the difference set
  int t_points = 256;
  std::vector<double> eps;
  std::vector<Certificate> certificates;

  std::uint64_t seed_agreement = 0, seed_coverage = 0, seed_identity = 0, seed_derivative = 0;
  std::size_t pairs_agreement = 0, pairs_coverage = 0, pairs_identity = 0;
  double tol_rate = 0.1, tol_identity = 0.05, tol_mass = 0.02, tol_derivative = 1e-6;

  std::vector<double> decay_radii;
  int decay_directions = 16;
  bool decay_two_sided = false;
  int curvature_level = 8;
  double holder_alpha = 0.1;
  int holder_octaves = 4;
  double holder_growth = 2.0;
  double interval_threshold = 0.05;
  double interval_min_length = 0.0;
  int coverage_cells = 100;
  std::vector<double> identity_gamma;
  int derivative_order = 1;
  int derivative_samples = 100;
  std::vector<double> derivative_radii;
  double agreement_eps = 1.0 / 64;
  int histogram_bins = 256;
  std::string output_dir;

  bool wants(Certificate c) const;
};

// Builds and checks the measure, body and grid descriptions against their preconditions; throws
// ConfigError on the first problem.
ExperimentConfig validate_config(const Config& cfg);

// Directory used when the config leaves output.dir empty: $DISTLAB_OUT, else
// "distlab-out".
std::string default_output_dir();

}  // namespace distlab
