#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "pendsim/config.hpp"
#include "pendsim/csv.hpp"
#include "pendsim/experiments.hpp"

using namespace pendsim;
namespace fs = std::filesystem;

namespace {

std::string issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    std::string all;
    for (const auto& i : e.issues()) all += i + "\n";
    return all;
  }
  return "";
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "pendsim_test_config";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Config, RoundTripsEveryPreset) {
  for (const auto& cfg : {preset_free_decay(), preset_relay(), preset_sinusoid(),
                          preset_sinusoid_relay(), preset_compare(), preset_mu_sweep(),
                          preset_basin()}) {
    EXPECT_EQ(parse_config(to_toml(cfg)), cfg) << cfg.name;
  }
}

TEST(Config, RoundTripsAwkwardValues) {
  ScenarioConfig cfg = preset_sinusoid();
  cfg.ctrl.k = 0.1 + 1e-17;
  cfg.phys.M = 1.0 / 3.0 + 1.0;
  cfg.disturbance.phase = -2.5e-300;
  cfg.name = "with \"quotes\" and \\ slash";
  EXPECT_EQ(parse_config(to_toml(cfg)), cfg);
}

TEST(Config, CheckedInScenariosMatchPresets) {
  const fs::path dir = PENDSIM_SCENARIO_DIR;
  EXPECT_EQ(load_config(dir / "free_decay.toml"), preset_free_decay());
  EXPECT_EQ(load_config(dir / "relay.toml"), preset_relay());
  EXPECT_EQ(load_config(dir / "sinusoid.toml"), preset_sinusoid());
  EXPECT_EQ(load_config(dir / "sinusoid_relay.toml"), preset_sinusoid_relay());
  EXPECT_EQ(load_config(dir / "compare.toml"), preset_compare());
  EXPECT_EQ(load_config(dir / "mu_sweep.toml"), preset_mu_sweep());
  EXPECT_EQ(load_config(dir / "basin.toml"), preset_basin());
}

TEST(Config, MissingKeysTakeDefaults) {
  const ScenarioConfig cfg = parse_config("name = \"x\"\n");
  EXPECT_EQ(cfg.phys, PhysicalParams{});
  EXPECT_EQ(cfg.model, ModelKind::kReduced);
}

TEST(Config, ReportsUnknownKeyWithLine) {
  const std::string msg = issues_of("name = \"x\"\n[ctrl]\nfoo = 1\n");
  EXPECT_NE(msg.find("foo"), std::string::npos);
  EXPECT_NE(msg.find("line 3"), std::string::npos);
}

TEST(Config, ReportsMalformedLines) {
  EXPECT_NE(issues_of("[phys\n").find("line 1"), std::string::npos);
  EXPECT_NE(issues_of("[phys]\nM = abc\n").find("M"), std::string::npos);
  EXPECT_NE(issues_of("model = \"quantum\"\n").find("model"), std::string::npos);
  EXPECT_NE(issues_of("[nope]\n").find("nope"), std::string::npos);
}

TEST(Config, InvariantsAreFieldLevel) {
  ScenarioConfig cfg = preset_mu_sweep();
  cfg.mu.reset();
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = preset_compare();
  cfg.consts_override = ConstsOverride{};
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = preset_relay();
  cfg.ctrl.rho = 0.5;
  cfg.solver.rtol = -1.0;
  try {
    validate(cfg);
    FAIL();
  } catch (const ConfigError& e) {
    ASSERT_GE(e.issues().size(), 2u);
    std::string all;
    for (const auto& i : e.issues()) all += i;
    EXPECT_NE(all.find("rho"), std::string::npos);
    EXPECT_NE(all.find("rtol"), std::string::npos);
  }
}

TEST(Config, WriteAndLoad) {
  const fs::path p = scratch_dir() / "cfg.toml";
  write_config(preset_basin(), p);
  EXPECT_EQ(load_config(p), preset_basin());
  EXPECT_THROW(load_config(scratch_dir() / "missing.toml"), ConfigError);
}

TEST(Csv, HeaderOnlyForEmptyTrajectory) {
  std::ostringstream out;
  write_csv(out, Trajectory{}, LyapunovReport{});
  EXPECT_EQ(out.str(), std::string(kTrajectoryCsvHeader) + "\n");
}

TEST(Csv, OneRowPerRecord) {
  const ScenarioResult res = run_scenario(preset_free_decay());
  std::ostringstream out;
  write_csv(out, res.trajectory, *res.report);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kTrajectoryCsvHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 13);
  }
  EXPECT_EQ(rows, 3001u);
}

TEST(Csv, ByteStable) {
  std::ostringstream a, b;
  const ScenarioResult r1 = run_scenario(preset_relay());
  const ScenarioResult r2 = run_scenario(preset_relay());
  write_csv(a, r1.trajectory, *r1.report);
  write_csv(b, r2.trajectory, *r2.report);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Csv, FailedWriteLeavesNothing) {
  const fs::path dir = scratch_dir() / "no_such_dir" / "x.csv";
  EXPECT_ANY_THROW(write_csv(Trajectory{}, LyapunovReport{}, dir));
  EXPECT_FALSE(fs::exists(dir));
  const fs::path ok = scratch_dir() / "ok.csv";
  write_csv(Trajectory{}, LyapunovReport{}, ok);
  EXPECT_TRUE(fs::exists(ok));
  EXPECT_FALSE(fs::exists(ok.string() + ".tmp"));
}

TEST(Csv, ReportHeader) {
  std::ostringstream out;
  write_report_csv(out, LyapunovReport{});
  EXPECT_EQ(out.str(), std::string(kReportCsvHeader) + "\n");
}
