#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pendsim/config.hpp"
#include "pendsim/lyapunov.hpp"
#include "pendsim/solver.hpp"

namespace pendsim {

struct ExperimentSummary {
  Trajectory::Status status = Trajectory::Status::kCompleted;
  std::string message;
  /// First record time after which ||x||_inf stays below the threshold;
  /// empty when the run never settles.
  std::optional<double> settling_time;
  /// max |component| over t >= amplitude_t_min, for (s, gamma, Omega, Omega').
  std::array<double, 4> steady_amplitude{};
  double max_steady_amplitude = 0.0;
  std::vector<std::pair<double, double>> sliding_intervals;
  std::optional<double> basin_radius;
  std::size_t lyapunov_violations = 0;
};

struct ScenarioResult {
  Trajectory trajectory;
  std::optional<LyapunovReport> report;  ///< empty for runs with < 3 records
  ExperimentSummary summary;
};

std::unique_ptr<SwitchedSystem> make_system(const ScenarioConfig& cfg);

/// y0 laid out in the system's state chart.
std::vector<double> initial_vector(const ScenarioConfig& cfg);

ExperimentSummary summarize(const Trajectory& traj, const SummaryOptions& opts);

/// Validate, integrate, monitor, summarize. Throws ConfigError on invalid
/// input; integration failures land in the summary status.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct MuDeviation {
  double mu = 0.0;
  /// sup over t in [5 mu, t_end] of ||x_singular - x_reduced||_inf.
  double deviation = 0.0;
  bool completed = true;
};

/// Runs the observer system for each mu with D = 0 and the relay off and
/// compares against the reduced system from the same x0. Sorted by mu
/// descending.
std::vector<MuDeviation> sweep_mu(const ScenarioConfig& cfg,
                                  std::vector<double> mus);

struct GridAxis {
  std::string name;  ///< s, gamma, Omega, OmegaDot, z1, z2, or z (both)
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 1;

  bool operator==(const GridAxis&) const = default;
};

struct BasinGrid {
  GridAxis first;
  GridAxis second;
};

/// Parses "gamma=-3:3:9,z=-2:2:9".
BasinGrid parse_grid(std::string_view text);

struct BasinCell {
  InitialState ic;
  double level = 0.0;
  bool converged = false;
  double final_norm = 0.0;
};

struct BasinResult {
  /// Every tested initial condition with level below this converged.
  double radius = 0.0;
  bool all_converged = false;
  std::vector<BasinCell> cells;
};

/// Level of an initial condition: V(s, gamma) + W(Omega, Omega') +
/// rho_composite * W_z(z1, z2).
double basin_level(const InitialState& ic, const ControllerParams& ctrl,
                   const DerivedConstants& consts);

BasinResult basin_probe(const ScenarioConfig& cfg, const BasinGrid& grid,
                        double converge_eps, double t_end);

struct CompareReport {
  double deviation = 0.0;       ///< sup ||full->reduced - reduced||_inf
  double gamma_residual = 0.0;  ///< max |gamma' + a gamma| along the plant
  Trajectory::Status full_status = Trajectory::Status::kCompleted;
  Trajectory::Status reduced_status = Trajectory::Status::kCompleted;
  std::string message;
};

/// Plant under u = u_bar with D = 0 versus the reduced model from the
/// mapped initial condition.
CompareReport compare_models(const ScenarioConfig& cfg);

/// Worker threads for sweeps; PENDSIM_THREADS caps it.
std::size_t worker_count();

/// Checked-in reference scenarios.
ScenarioConfig preset_free_decay();
ScenarioConfig preset_relay();
ScenarioConfig preset_sinusoid();
ScenarioConfig preset_sinusoid_relay();
ScenarioConfig preset_compare();
ScenarioConfig preset_mu_sweep();
ScenarioConfig preset_basin();

}  // namespace pendsim
