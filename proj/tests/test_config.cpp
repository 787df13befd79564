#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "distlab/experiment.hpp"

using namespace distlab;

TEST(Config, DefaultsAndOverrides) {
  Config c = Config::parse("measure.ratio = 0.4\n# comment\n\ngrid.j_max = 8  # trailing\n");
  EXPECT_DOUBLE_EQ(c.number("measure.ratio"), 0.4);
  EXPECT_EQ(c.integer("grid.j_max"), 8);
  EXPECT_EQ(c.get("body.kind"), "ball");
  EXPECT_EQ(c.numbers("identity.gamma").size(), 3u);
}

TEST(Config, UnknownAndRepeatedKeys) {
  EXPECT_THROW(Config::parse("measure.ratoi = 0.4\n"), ConfigError);
  EXPECT_THROW(Config::parse("grid.j_max = 8\ngrid.j_max = 9\n"), ConfigError);
  EXPECT_THROW(Config::parse("no equals sign\n"), ConfigError);
}

TEST(Config, Validation) {
  EXPECT_THROW(validate_config(Config::parse("measure.ratio = 0.7\n")), std::exception);
  EXPECT_THROW(validate_config(Config::parse("certificates.list = decay, bogus\n")), ConfigError);
  EXPECT_THROW(validate_config(Config::parse("grid.t_max = 0.5\n")), ConfigError);
  EXPECT_THROW(validate_config(Config::parse("grid.j_max = x\n")), ConfigError);
  ExperimentConfig e = validate_config(Config::parse("certificates.list = coverage\n"));
  EXPECT_TRUE(e.wants(Certificate::interval));  // coverage needs intervals
  EXPECT_NEAR(e.grid.t_max, std::sqrt(2.0), 1e-8);
}

TEST(Config, ClaimTags) {
  EXPECT_STREQ(certificate_claim(Certificate::remainder), "Thm1.ii.remainder");
  EXPECT_STREQ(certificate_claim(Certificate::decay), "Lemma.stationary.decay");
  EXPECT_EQ(all_certificates().size(), 10u);
}

TEST(Config, PresetsValidate) {
  for (const auto& n : preset_names()) EXPECT_NO_THROW(validate_config(Config::parse(preset_text(n)))) << n;
  EXPECT_THROW(preset_text("nope"), ConfigError);
}

TEST(Experiment, EmptyCertificateListGivesDiagnostics) {
  auto dir = std::filesystem::temp_directory_path() / "distlab_empty_run";
  std::filesystem::remove_all(dir);
  ExperimentConfig e = validate_config(Config::parse("grid.j_max = 5\n"));
  RunResult r = run_experiment(e, dir.string());
  EXPECT_EQ(r.exit_code, kExitPass);
  EXPECT_TRUE(r.verdicts.empty());
  EXPECT_TRUE(std::filesystem::exists(dir / "verdict.txt"));
  EXPECT_TRUE(std::filesystem::exists(dir / "grid_shells.csv"));
  std::ifstream f(dir / "verdict.txt");
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_NE(ss.str().find("summary.pass = true"), std::string::npos);
  EXPECT_NE(ss.str().find("grid.volume_error"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(Experiment, VacuousRemainderWarns) {
  auto dir = std::filesystem::temp_directory_path() / "distlab_vacuous_run";
  ExperimentConfig e =
      validate_config(Config::parse("measure.ratio = 0.35\ngrid.j_max = 7\ncertificates.list = remainder\n"));
  RunResult r = run_experiment(e, dir.string());
  EXPECT_EQ(r.exit_code, kExitPass);
  ASSERT_EQ(r.verdicts.size(), 1u);
  EXPECT_TRUE(r.verdicts[0].pass);
  EXPECT_FALSE(r.verdicts[0].warnings.empty());
  std::filesystem::remove_all(dir);
}
