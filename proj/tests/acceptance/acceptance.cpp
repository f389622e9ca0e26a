// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pendsim/closed_loop.hpp"
#include "pendsim/experiments.hpp"
#include "pendsim/verify.hpp"

using namespace pendsim;

namespace {

const std::filesystem::path kScenarios = PENDSIM_SCENARIO_DIR;

struct Outcome {
  bool passed = false;
  std::string detail;
};

double norm_inf(const ReducedState& x) {
  return std::max({std::abs(x.s), std::abs(x.gamma), std::abs(x.Omega), std::abs(x.OmegaDot)});
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ScenarioConfig scenario(const char* name) { return load_config(kScenarios / name); }

// Shared between criteria 3, 4 and 9.
ScenarioResult free_decay;

Outcome transforms() {
  const CheckResult a = check_beta_round_trip(1000, 1e-12);
  const CheckResult b = check_state_round_trip(100, 1e-10);
  return {a.passed && b.passed, a.detail + "; " + b.detail};
}

Outcome equilibrium() {
  ScenarioConfig cfg = scenario("free_decay.toml");
  cfg.y0 = InitialState{0, 0, 0, 0, 0, 0};
  cfg.ctrl.A_gain = cfg.ctrl.B_gain = 0.0;
  const ScenarioResult res = run_scenario(cfg);
  double worst = 0.0;
  for (const Record& r : res.trajectory.records) worst = std::max(worst, norm_inf(r.obs.x));
  const bool ok = res.trajectory.completed() && res.trajectory.records.back().t == 30.0 &&
                  worst < 1e-9;
  return {ok, fmt("max ||x|| %.3g over [0, %.0f]", worst, res.trajectory.t_stop)};
}

Outcome free_decay_run() {
  free_decay = run_scenario(scenario("free_decay.toml"));
  const Trajectory& tr = free_decay.trajectory;
  if (!tr.completed()) return {false, "run failed: " + tr.message};
  const double settle = free_decay.summary.settling_time.value_or(INFINITY);
  double late = 0.0, min_gamma = INFINITY, min_s_late = INFINITY;
  bool s_positive = false;
  for (const Record& r : tr.records) {
    if (r.t >= 10.0) late = std::max(late, norm_inf(r.obs.x));
    if (r.t < settle) min_gamma = std::min(min_gamma, r.obs.x.gamma);
    if (r.t >= 8.0) min_s_late = std::min(min_s_late, r.obs.x.s);
    s_positive = s_positive || r.obs.x.s > 0.0;
  }
  const bool ok = late < 0.05 && min_gamma > 0.0 && s_positive && min_s_late >= -1e-3;
  return {ok, fmt("max ||x|| on [10,30] %.3g; min gamma before settling (t=%.2f) %.3g; "
                  "min s on [8,30] %.3g",
                  late, settle, min_gamma, min_s_late)};
}

Outcome relay_run() {
  const ScenarioResult res = run_scenario(scenario("relay.toml"));
  const Trajectory& tr = res.trajectory;
  if (!tr.completed()) return {false, "run failed: " + tr.message};
  std::size_t good = 0;
  double worst_gamma = 0.0;
  const auto intervals = tr.sliding_intervals();
  for (const auto& [a, b] : intervals) {
    if (!(b > a)) continue;
    double w = 0.0;
    for (int i = 0; i <= 200; ++i) {
      w = std::max(w, std::abs(dense_eval(tr, a + (b - a) * i / 200.0)[1]));
    }
    worst_gamma = std::max(worst_gamma, w);
    if (w <= 1e-8) ++good;
  }
  const double settle = res.summary.settling_time.value_or(INFINITY);
  const double ref = free_decay.summary.settling_time.value_or(INFINITY);
  const bool ok = good >= 1 && settle < ref;
  return {ok, fmt("%zu sliding interval(s), max |gamma| inside %.2g; settling %.2f vs free decay %.2f",
                  good, worst_gamma, settle, ref)};
}

double late_amplitude(const ScenarioResult& r) { return r.summary.max_steady_amplitude; }

double sinusoid_amplitude = NAN;

Outcome sinusoid_run() {
  const ScenarioResult res = run_scenario(scenario("sinusoid.toml"));
  sinusoid_amplitude = late_amplitude(res);
  const bool ok = res.trajectory.completed() && sinusoid_amplitude >= 0.05 &&
                  sinusoid_amplitude <= 0.2;
  return {ok, fmt("late amplitude %.4g (range [0.05, 0.2])", sinusoid_amplitude)};
}

Outcome sinusoid_relay_run() {
  const ScenarioResult res = run_scenario(scenario("sinusoid_relay.toml"));
  const double amp = late_amplitude(res);
  const std::size_t n = res.summary.sliding_intervals.size();
  const bool ok = res.trajectory.completed() && amp <= 0.05 && amp < sinusoid_amplitude && n > 0;
  return {ok, fmt("late amplitude %.4g vs uncontrolled %.4g; %zu sliding interval(s)", amp,
                  sinusoid_amplitude, n)};
}

Outcome cross_model() {
  const ScenarioConfig cfg = scenario("compare.toml");
  double max_beta = 0.0;
  {
    const ScenarioResult res = run_scenario(cfg);
    for (const Record& r : res.trajectory.records) max_beta = std::max(max_beta, std::abs(r.obs.full.beta));
  }
  const CompareReport rep = compare_models(cfg);
  const double tol = 50.0 * cfg.solver.rtol;
  const bool ok = max_beta <= 0.8 && rep.deviation <= tol && rep.gamma_residual <= 1e-6;
  return {ok, fmt("max |beta| %.3f; deviation %.3g (tol %.1g); gamma residual %.3g", max_beta,
                  rep.deviation, tol, rep.gamma_residual)};
}

Outcome mu_sweep() {
  const auto rows = sweep_mu(scenario("mu_sweep.toml"), {0.1, 0.03, 0.01, 0.003});
  bool decreasing = true;
  double lo = INFINITY, hi = 0.0;
  std::string table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].completed) decreasing = false;
    if (i > 0 && !(rows[i].deviation < rows[i - 1].deviation)) decreasing = false;
    lo = std::min(lo, rows[i].deviation / rows[i].mu);
    hi = std::max(hi, rows[i].deviation / rows[i].mu);
    table += fmt(" %.3g:%.3g", rows[i].mu, rows[i].deviation);
  }
  const bool ok = decreasing && hi / lo < 3.0;
  return {ok, fmt("mu:deviation%s; ratio spread %.3g", table.c_str(), hi / lo)};
}

Outcome lyapunov() {
  const CheckResult grid = check_angle_lyapunov_grid(200);
  const CheckResult decay = check_observer_decay(0.01);
  const std::size_t v = free_decay.report ? free_decay.report->violations.size() : 1;
  const bool ok = grid.passed && decay.passed && free_decay.report && v == 0;
  return {ok, grid.detail + "; " + decay.detail + fmt("; %zu monitor violations", v)};
}

Outcome basin() {
  ScenarioConfig cfg = scenario("basin.toml");
  const BasinGrid grid = parse_grid("Omega=-2.5:2.5:9,z=-20:20:9");
  double prev = -INFINITY;
  bool monotone = true;
  std::string table;
  for (double mu : {0.1, 0.03, 0.01}) {
    cfg.mu = mu;
    const BasinResult r = basin_probe(cfg, grid, 1e-2, 20.0);
    std::size_t conv = 0;
    for (const auto& c : r.cells) conv += c.converged;
    table += fmt(" mu=%.3g: radius %.4g (%zu/%zu converged)", mu, r.radius, conv, r.cells.size());
    if (r.radius < prev) monotone = false;
    prev = r.radius;
  }
  return {monotone, table.substr(1)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {1, "transform round trip", transforms, 1.0},
      {2, "equilibrium at origin", equilibrium, 0.0},
      {3, "free decay settles", free_decay_run, 2.0},
      {4, "relay slides and settles faster", relay_run, 2.0},
      {5, "sinusoid amplitude without control", sinusoid_run, 0.0},
      {6, "sinusoid amplitude with relay", sinusoid_relay_run, 0.0},
      {7, "full plant matches reduced model", cross_model, 5.0},
      {8, "observer mu sweep", mu_sweep, 0.0},
      {9, "lyapunov properties", lyapunov, 0.0},
      {10, "basin grows as mu shrinks", basin, 60.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = o.passed;
    std::string timing = fmt("%.3fs", secs);
    if (c.budget_s > 0.0) {
      timing += fmt(" (budget %.0fs)", c.budget_s);
      ok = ok && secs < c.budget_s;
    }
    std::printf("%s criterion %d %s: %s [%s]\n", ok ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
