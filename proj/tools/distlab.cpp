// Command line front end: run a config, run a shipped preset, or validate.
#include <CLI11.hpp>

#include <iostream>

#include "distlab/experiment.hpp"
#include "distlab/parallel.hpp"

using namespace distlab;

namespace {

void print_verdicts(const RunResult& r) {
  for (const auto& v : r.verdicts) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << certificate_name(v.certificate) << " [" << v.claim << "]";
    if (!v.warnings.empty()) std::cout << " (" << v.warnings.size() << " warning" << (v.warnings.size() > 1 ? "s" : "") << ")";
    std::cout << "\n";
    for (const auto& w : v.warnings) std::cout << "  warning: " << w << "\n";
  }
  std::cout << "reports in " << r.output_dir << "\n";
}

// Config problems exit 2, numerical trouble during the run exits 3.
int execute(const Config& raw, const std::string& out) {
  ExperimentConfig cfg;
  try {
    cfg = validate_config(raw);
  } catch (const std::exception& e) {
    std::cerr << "distlab: config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  try {
    RunResult r = run_experiment(cfg, out);
    print_verdicts(r);
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "distlab: runtime error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distlab: distance-density certificates for self-similar measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "distlab 0.1.0");

  std::string config_path, preset, out;
  int threads = 0;
  bool list = false, print = false;

  auto* run = app.add_subcommand("run", "Run the certificates listed in a config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides output.dir)");
  run->add_option("--threads", threads, "Worker cap; results do not depend on it")->check(CLI::NonNegativeNumber);

  auto* pre = app.add_subcommand("preset", "Run a shipped preset");
  pre->add_option("name", preset, "Preset name");
  pre->add_option("--out", out, "Output directory (overrides output.dir)");
  pre->add_option("--threads", threads, "Worker cap; results do not depend on it")->check(CLI::NonNegativeNumber);
  pre->add_flag("--list", list, "List preset names");
  pre->add_flag("--print", print, "Print the preset config instead of running it");

  auto* val = app.add_subcommand("validate", "Check a config without computing anything");
  val->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }
  if (threads > 0) set_threads(threads);

  try {
    if (*run) return execute(Config::load(config_path), out);
    if (*val) {
      Config raw = Config::load(config_path);
      validate_config(raw);
      for (const auto& [k, v] : raw.effective()) std::cout << k << " = " << v << "\n";
      std::cout << "valid\n";
      return kExitPass;
    }
    if (list) {
      for (const auto& n : preset_names()) std::cout << n << "\n";
      return kExitPass;
    }
    if (preset.empty()) {
      std::cerr << "distlab: preset name required (see --list)\n";
      return kExitConfigError;
    }
    std::string text = preset_text(preset);
    if (print) {
      std::cout << text;
      return kExitPass;
    }
    return execute(Config::parse(text, "preset " + preset), out);
  } catch (const std::exception& e) {
    std::cerr << "distlab: config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
