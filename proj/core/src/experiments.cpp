#include "pendsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "pendsim/closed_loop.hpp"
#include "pendsim/errors.hpp"

namespace pendsim {

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PENDSIM_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) {
      n = std::min(n, static_cast<std::size_t>(cap));
    }
  }
  return n;
}

namespace {

// Runs fn(i) for i in [0, n) on worker_count() threads. Each index writes
// only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double norm_inf(const ReducedState& x) {
  return std::max({std::abs(x.s), std::abs(x.gamma), std::abs(x.Omega),
                   std::abs(x.OmegaDot)});
}

double distance_inf(const ReducedState& a, const ReducedState& b) {
  return std::max({std::abs(a.s - b.s), std::abs(a.gamma - b.gamma),
                   std::abs(a.Omega - b.Omega),
                   std::abs(a.OmegaDot - b.OmegaDot)});
}

ReducedState reduced_ic(const InitialState& y0) {
  return {y0.s, y0.gamma, y0.Omega, y0.OmegaDot};
}

}  // namespace

std::unique_ptr<SwitchedSystem> make_system(const ScenarioConfig& cfg) {
  switch (cfg.model) {
    case ModelKind::kReduced:
      return std::make_unique<ReducedSystem>(
          make_reduced_model(cfg.phys, cfg.ctrl, cfg.consts_override),
          cfg.disturbance);
    case ModelKind::kSingular:
      return std::make_unique<SingularSystem>(
          cfg.phys, cfg.ctrl, cfg.consts_override, cfg.mu.value_or(0.0),
          cfg.disturbance, cfg.ctrl.PiBar > 0.0);
    case ModelKind::kFull:
      return std::make_unique<FullSystem>(cfg.phys, cfg.ctrl, cfg.disturbance);
  }
  throw ParameterError("model: unknown kind");
}

std::vector<double> initial_vector(const ScenarioConfig& cfg) {
  const ReducedState x = reduced_ic(cfg.y0);
  switch (cfg.model) {
    case ModelKind::kReduced:
      return {x.s, x.gamma, x.Omega, x.OmegaDot};
    case ModelKind::kSingular:
      return {x.s, x.gamma, x.Omega, x.OmegaDot, cfg.y0.z1, cfg.y0.z2};
    case ModelKind::kFull: {
      const FullState f = reduced_to_full(x, cfg.ctrl, cfg.phys);
      return {f.r, f.rdot, f.beta, f.betadot};
    }
  }
  return {};
}

ExperimentSummary summarize(const Trajectory& traj, const SummaryOptions& opts) {
  ExperimentSummary out;
  out.status = traj.status;
  out.message = traj.message;
  out.sliding_intervals = traj.sliding_intervals();
  if (traj.records.empty()) {
    return out;
  }
  if (traj.completed()) {
    std::optional<std::size_t> last_outside;
    for (std::size_t i = 0; i < traj.records.size(); ++i) {
      if (norm_inf(traj.records[i].obs.x) >= opts.settle_threshold) {
        last_outside = i;
      }
    }
    if (!last_outside) {
      out.settling_time = traj.records.front().t;
    } else if (*last_outside + 1 < traj.records.size()) {
      out.settling_time = traj.records[*last_outside + 1].t;
    }
  }
  for (const Record& r : traj.records) {
    if (r.t < opts.amplitude_t_min) continue;
    const ReducedState& x = r.obs.x;
    const std::array<double, 4> v{std::abs(x.s), std::abs(x.gamma),
                                  std::abs(x.Omega), std::abs(x.OmegaDot)};
    for (std::size_t k = 0; k < 4; ++k) {
      out.steady_amplitude[k] = std::max(out.steady_amplitude[k], v[k]);
    }
  }
  out.max_steady_amplitude = *std::max_element(out.steady_amplitude.begin(),
                                               out.steady_amplitude.end());
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const DerivedConstants consts = derive_constants(cfg.phys, cfg.ctrl);
  const auto system = make_system(cfg);
  ScenarioResult result;
  result.trajectory = integrate(*system, initial_vector(cfg), cfg.solver);
  if (result.trajectory.records.size() >= 3) {
    MonitorOptions mopts;
    mopts.rtol = cfg.solver.rtol;
    mopts.atol = cfg.solver.atol;
    result.report = monitor(result.trajectory, cfg.ctrl, consts, mopts);
  }
  result.summary = summarize(result.trajectory, cfg.summary);
  if (result.report) {
    result.summary.lyapunov_violations = result.report->violations.size();
  }
  return result;
}

std::vector<MuDeviation> sweep_mu(const ScenarioConfig& cfg,
                                  std::vector<double> mus) {
  if (cfg.model != ModelKind::kSingular) {
    throw ConfigError({"model: sweep-mu requires model = \"singular\""});
  }
  for (double mu : mus) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
      throw ConfigError({"mu: every swept value must be finite and > 0"});
    }
  }
  std::sort(mus.begin(), mus.end(), std::greater<>());

  ScenarioConfig base = cfg;
  base.disturbance = Disturbance::zero();
  base.ctrl.PiBar = 0.0;
  base.mu = mus.empty() ? 0.1 : mus.front();
  validate(base);

  ScenarioConfig ref_cfg = base;
  ref_cfg.model = ModelKind::kReduced;
  ReducedModel ref_model = make_plant_reduced_model(base.phys, base.ctrl);
  if (base.consts_override) {
    ref_model.d1 = base.consts_override->d1;
    ref_model.d2 = base.consts_override->d2;
    ref_model.d3 = base.consts_override->d3;
  }
  const ReducedSystem reference(ref_model, Disturbance::zero());
  const Trajectory ref =
      integrate(reference, initial_vector(ref_cfg), base.solver);

  std::vector<MuDeviation> out(mus.size());
  parallel_for(mus.size(), [&](std::size_t i) {
    ScenarioConfig run = base;
    run.mu = mus[i];
    const auto system = make_system(run);
    const Trajectory traj = integrate(*system, initial_vector(run), run.solver);
    MuDeviation row{mus[i], 0.0, traj.completed() && ref.completed()};
    if (!row.completed) {
      row.deviation = std::numeric_limits<double>::infinity();
    } else {
      const std::size_t n = std::min(traj.records.size(), ref.records.size());
      for (std::size_t k = 0; k < n; ++k) {
        if (traj.records[k].t < 5.0 * mus[i]) continue;
        row.deviation = std::max(
            row.deviation, distance_inf(traj.records[k].obs.x, ref.records[k].obs.x));
      }
    }
    out[i] = row;
  });
  return out;
}

BasinGrid parse_grid(std::string_view text) {
  auto parse_axis = [](std::string_view text) {
    GridAxis axis;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError({"grid: expected name=lo:hi:n, got '" + std::string(text) + "'"});
    }
    axis.name = std::string(text.substr(0, eq));
    static const std::vector<std::string> known{"s",  "gamma", "Omega", "OmegaDot",
                                                "z1", "z2",    "z"};
    if (std::find(known.begin(), known.end(), axis.name) == known.end()) {
      throw ConfigError({"grid: unknown axis '" + axis.name + "'"});
    }
    std::string rest(text.substr(eq + 1));
    double lo = 0, hi = 0;
    long n = 0;
    char tail = 0;
    if (std::sscanf(rest.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &n, &tail) != 3 ||
        n < 1 || !std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
      throw ConfigError({"grid: axis '" + axis.name + "' must be lo:hi:n with lo <= hi, n >= 1"});
    }
    axis.lo = lo;
    axis.hi = hi;
    axis.n = static_cast<std::size_t>(n);
    return axis;
  };
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw ConfigError({"grid: expected two comma-separated axes"});
  }
  BasinGrid grid{parse_axis(text.substr(0, comma)), parse_axis(text.substr(comma + 1))};
  if (grid.first.name == grid.second.name) {
    throw ConfigError({"grid: axes must differ"});
  }
  return grid;
}

double basin_level(const InitialState& ic, const ControllerParams& ctrl,
                   const DerivedConstants& consts) {
  return position_lyapunov(ic.s, ic.gamma, ctrl.k) +
         angle_lyapunov(ic.Omega, ic.OmegaDot, consts.q, consts.r_const) +
         ctrl.rho_composite * observer_lyapunov(ic.z1, ic.z2);
}

namespace {

void set_axis(InitialState& ic, const std::string& name, double v) {
  if (name == "s") ic.s = v;
  else if (name == "gamma") ic.gamma = v;
  else if (name == "Omega") ic.Omega = v;
  else if (name == "OmegaDot") ic.OmegaDot = v;
  else if (name == "z1") ic.z1 = v;
  else if (name == "z2") ic.z2 = v;
  else if (name == "z") ic.z1 = ic.z2 = v;
}

double axis_value(const GridAxis& a, std::size_t i) {
  if (a.n == 1) return a.lo;
  return a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(a.n - 1);
}

}  // namespace

BasinResult basin_probe(const ScenarioConfig& cfg, const BasinGrid& grid,
                        double converge_eps, double t_end) {
  if (!(converge_eps > 0.0)) {
    throw ConfigError({"basin: converge_eps must be > 0"});
  }
  ScenarioConfig base = cfg;
  base.solver.t_end = t_end;
  base.solver.record_dt = std::min(base.solver.record_dt, t_end);
  validate(base);
  const DerivedConstants consts = derive_constants(base.phys, base.ctrl);

  BasinResult result;
  result.cells.resize(grid.first.n * grid.second.n);
  parallel_for(result.cells.size(), [&](std::size_t idx) {
    ScenarioConfig run = base;
    set_axis(run.y0, grid.first.name, axis_value(grid.first, idx / grid.second.n));
    set_axis(run.y0, grid.second.name, axis_value(grid.second, idx % grid.second.n));
    BasinCell cell;
    cell.ic = run.y0;
    cell.level = basin_level(run.y0, run.ctrl, consts);
    const auto system = make_system(run);
    const Trajectory traj = integrate(*system, initial_vector(run), run.solver);
    cell.final_norm = std::numeric_limits<double>::infinity();
    if (traj.completed()) {
      double n = 0.0;
      for (double v : traj.state_at_stop) n = std::max(n, std::abs(v));
      cell.final_norm = n;
    }
    cell.converged = traj.completed() && cell.final_norm < converge_eps;
    result.cells[idx] = cell;
  });

  double lowest_failure = std::numeric_limits<double>::infinity();
  double highest = 0.0;
  for (const BasinCell& c : result.cells) {
    highest = std::max(highest, c.level);
    if (!c.converged) lowest_failure = std::min(lowest_failure, c.level);
  }
  result.all_converged = !std::isfinite(lowest_failure);
  result.radius = result.all_converged ? highest : lowest_failure;
  return result;
}

CompareReport compare_models(const ScenarioConfig& cfg_in) {
  ScenarioConfig cfg = cfg_in;
  if (cfg.model != ModelKind::kFull) {
    throw ConfigError({"model: compare requires model = \"full\""});
  }
  if (cfg.disturbance.kind != Disturbance::Kind::kZero) {
    throw ConfigError({"disturbance: compare requires kind = \"zero\""});
  }
  validate(cfg);

  const FullSystem plant(cfg.phys, cfg.ctrl, Disturbance::zero());
  const Trajectory full = integrate(plant, initial_vector(cfg), cfg.solver);

  ReducedModel model = make_plant_reduced_model(cfg.phys, cfg.ctrl);
  model.ctrl.PiBar = 0.0;
  const ReducedSystem reduced(model, Disturbance::zero());
  const ReducedState x0 = reduced_ic(cfg.y0);
  const std::vector<double> y0{x0.s, x0.gamma, x0.Omega, x0.OmegaDot};
  const Trajectory red = integrate(reduced, y0, cfg.solver);

  CompareReport report;
  report.full_status = full.status;
  report.reduced_status = red.status;
  report.message = full.completed() ? red.message : full.message;
  const std::size_t n = std::min(full.records.size(), red.records.size());
  for (std::size_t k = 0; k < n; ++k) {
    report.deviation = std::max(
        report.deviation, distance_inf(full.records[k].obs.x, red.records[k].obs.x));
  }
  for (const Record& r : full.records) {
    report.gamma_residual =
        std::max(report.gamma_residual,
                 std::abs(plant.gamma_rate(r.t, r.state) + cfg.ctrl.a * r.obs.x.gamma));
  }
  if (!full.completed() || !red.completed()) {
    report.deviation = std::numeric_limits<double>::infinity();
  }
  return report;
}

ScenarioConfig preset_free_decay() {
  ScenarioConfig cfg;
  cfg.name = "free_decay";
  cfg.model = ModelKind::kReduced;
  cfg.consts_override = ConstsOverride{1.0, 1.0, 1.0};
  cfg.ctrl.A_gain = 0.0;
  cfg.ctrl.B_gain = 0.0;
  cfg.outputs.trajectory = "free_decay.csv";
  return cfg;
}

ScenarioConfig preset_relay() {
  ScenarioConfig cfg = preset_free_decay();
  cfg.name = "relay";
  cfg.ctrl.A_gain = 0.03;
  cfg.outputs.trajectory = "relay.csv";
  return cfg;
}

ScenarioConfig preset_sinusoid() {
  ScenarioConfig cfg = preset_free_decay();
  cfg.name = "sinusoid";
  cfg.ctrl.B_gain = 0.05;
  cfg.disturbance = Disturbance::sinusoid(1.0, 1.0, 0.0);
  cfg.outputs.trajectory = "sinusoid.csv";
  return cfg;
}

ScenarioConfig preset_sinusoid_relay() {
  ScenarioConfig cfg = preset_sinusoid();
  cfg.name = "sinusoid_relay";
  cfg.ctrl.A_gain = 0.05;
  cfg.outputs.trajectory = "sinusoid_relay.csv";
  return cfg;
}

ScenarioConfig preset_compare() {
  ScenarioConfig cfg;
  cfg.name = "compare";
  cfg.model = ModelKind::kFull;
  cfg.y0 = InitialState{-0.3, 0.4, 0.8, 0.3, 0.0, 0.0};
  cfg.solver.t_end = 10.0;
  cfg.outputs.trajectory = "compare.csv";
  return cfg;
}

ScenarioConfig preset_mu_sweep() {
  ScenarioConfig cfg;
  cfg.name = "mu_sweep";
  cfg.model = ModelKind::kSingular;
  cfg.mu = 0.01;
  cfg.ctrl.PiBar = 0.0;
  cfg.y0.z1 = 0.2;
  cfg.y0.z2 = 0.2;
  cfg.outputs.trajectory = "mu_sweep.csv";
  return cfg;
}

ScenarioConfig preset_basin() {
  ScenarioConfig cfg = preset_mu_sweep();
  cfg.name = "basin";
  cfg.y0 = InitialState{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  cfg.solver.t_end = 20.0;
  cfg.solver.record_dt = 0.1;
  cfg.outputs.trajectory = "basin.csv";
  return cfg;
}

}  // namespace pendsim
