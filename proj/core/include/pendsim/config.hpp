#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pendsim/dynamics.hpp"
#include "pendsim/model.hpp"
#include "pendsim/solver.hpp"

namespace pendsim {

enum class ModelKind { kFull, kReduced, kSingular };

const char* to_string(ModelKind kind);

/// Initial condition in the transformed chart. z1, z2 are the initial
/// velocity-estimate errors of the singular model; ignored elsewhere.
struct InitialState {
  double s = -0.7;
  double gamma = 0.7;
  double Omega = 1.0;
  double OmegaDot = 0.5;
  double z1 = 0.0;
  double z2 = 0.0;

  bool operator==(const InitialState&) const = default;
};

struct SummaryOptions {
  double settle_threshold = 0.05;
  double amplitude_t_min = 15.0;

  bool operator==(const SummaryOptions&) const = default;
};

struct OutputPaths {
  std::string trajectory;
  std::string report;

  bool operator==(const OutputPaths&) const = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ModelKind model = ModelKind::kReduced;
  PhysicalParams phys;
  ControllerParams ctrl;
  std::optional<ConstsOverride> consts_override;
  Disturbance disturbance;
  InitialState y0;
  std::optional<double> mu;
  SolverOptions solver;
  SummaryOptions summary;
  OutputPaths outputs;

  bool operator==(const ScenarioConfig&) const = default;
};

/// One or more field-level problems with a scenario file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Checks every invariant; collects all problems into one ConfigError.
void validate(const ScenarioConfig& cfg);

ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Serializes every field; parse_config(to_toml(cfg)) == cfg.
std::string to_toml(const ScenarioConfig& cfg);
void write_config(const ScenarioConfig& cfg, const std::filesystem::path& path);

}  // namespace pendsim
