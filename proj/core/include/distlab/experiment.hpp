#pragma once

#include <string>
#include <utility>
#include <vector>

#include "distlab/config.hpp"

namespace distlab {

enum ExitCode { kExitPass = 0, kExitCertificateFailure = 1, kExitConfigError = 2, kExitRuntimeError = 3 };

struct CertificateVerdict {
  Certificate certificate;
  std::string claim;
  bool pass = false;
  std::vector<std::string> warnings;
};

struct RunResult {
  int exit_code = kExitPass;
  std::string output_dir;
  std::vector<CertificateVerdict> verdicts;
  // key = value lines of the verdict file, in order
  std::vector<std::pair<std::string, std::string>> report;
  std::vector<std::string> files;  // written, relative to output_dir
};

// Builds the grid once, runs the requested certificates in dependency order
// and writes verdict.txt plus one CSV per certificate. out_dir overrides
// output.dir when non-empty.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir = "");

// Names and config text of the shipped presets.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

}  // namespace distlab
