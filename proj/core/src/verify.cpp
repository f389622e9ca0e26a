#include "pendsim/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <limits>
#include <algorithm>

#include "pendsim/errors.hpp"
#include "pendsim/experiments.hpp"
#include "pendsim/lyapunov.hpp"
#include "pendsim/transform.hpp"

namespace pendsim {
namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

// z' = -z / mu with no slow coupling: the boundary-layer system.
class BoundaryLayer final : public SwitchedSystem {
 public:
  explicit BoundaryLayer(double mu) : mu_(mu) {}
  std::size_t dimension() const override { return 2; }
  void rhs(double, std::span<const double> y, double,
           std::span<double> dydt) const override {
    dydt[0] = -y[0] / mu_;
    dydt[1] = -y[1] / mu_;
  }
  double relay_amplitude() const override { return 0.0; }
  bool relay_active() const override { return false; }
  double disturbance(double) const override { return 0.0; }
  Observation observe(double, std::span<const double> y) const override {
    Observation obs;
    obs.z = std::array<double, 2>{y[0], y[1]};
    return obs;
  }

 private:
  double mu_;
};

}  // namespace

CheckResult check_beta_round_trip(std::size_t n, double tol) {
  const double lo = -std::numbers::pi / 2 + 0.01;
  const double hi = std::numbers::pi / 2 - 0.01;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    worst = std::max(worst, std::abs(beta_of_omega(omega_of_beta(b)) - b));
  }
  return {"beta_round_trip", worst <= tol, fmt("max error %.3g (tol %.1g)", worst, tol)};
}

CheckResult check_state_round_trip(std::size_t n, double tol) {
  const PhysicalParams phys;
  const ControllerParams ctrl;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> wide(-2.0, 2.0);
  std::uniform_real_distribution<double> angle(-1.4, 1.4);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const FullState x{wide(rng), wide(rng), angle(rng), wide(rng)};
    const FullState back = reduced_to_full(full_to_reduced(x, ctrl, phys), ctrl, phys);
    const double e = std::max({std::abs(back.r - x.r), std::abs(back.rdot - x.rdot),
                               std::abs(back.beta - x.beta),
                               std::abs(back.betadot - x.betadot)});
    worst = std::max(worst, e / std::max(1.0, std::max({std::abs(x.r), std::abs(x.rdot),
                                                        std::abs(x.betadot)})));
  }
  return {"state_round_trip", worst <= tol, fmt("max error %.3g (tol %.1g)", worst, tol)};
}

CheckResult check_angle_lyapunov_grid(std::size_t n) {
  const DerivedConstants k = derive_constants(PhysicalParams{}, ControllerParams{});
  const double span = 3.0;
  double min_value = std::numeric_limits<double>::infinity();
  std::size_t bad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double Om = -span + 2 * span * static_cast<double>(i) / static_cast<double>(n - 1);
      const double Od = -span + 2 * span * static_cast<double>(j) / static_cast<double>(n - 1);
      const double w = angle_lyapunov(Om, Od, k.q, k.r_const);
      min_value = std::min(min_value, w);
      const bool origin = Om == 0.0 && Od == 0.0;
      if (origin ? w != 0.0 : !(w > 0.0)) ++bad;
    }
  }
  const double at_origin = angle_lyapunov(0.0, 0.0, k.q, k.r_const);
  const bool ok = bad == 0 && at_origin == 0.0;
  return {"angle_lyapunov_grid", ok,
          fmt("min W %.3g, W(0,0) = %.3g", min_value, at_origin) +
              ", failing points " + std::to_string(bad)};
}

CheckResult check_observer_decay(double mu) {
  const BoundaryLayer layer(mu);
  SolverOptions opts;
  opts.rtol = 1e-11;
  opts.atol = 1e-14;
  opts.t_end = 5.0 * mu;
  opts.record_dt = mu / 100.0;
  opts.max_step = mu / 10.0;
  const std::vector<double> z0{0.2, 0.2};
  const Trajectory traj = integrate(layer, z0, opts);
  if (!traj.completed() || traj.records.size() < 3) {
    return {"observer_decay", false, "integration failed: " + traj.message};
  }
  // Central-difference error of exp(-2t/mu) at step h is about (2h/mu)^2 / 6.
  const double h = opts.record_dt;
  const double tol = 10.0 * (2 * h / mu) * (2 * h / mu) / 6.0;
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.records.size(); ++i) {
    const auto& prev = *traj.records[i - 1].obs.z;
    const auto& cur = *traj.records[i].obs.z;
    const auto& next = *traj.records[i + 1].obs.z;
    const double rate = (observer_lyapunov(next[0], next[1]) -
                         observer_lyapunov(prev[0], prev[1])) /
                        (traj.records[i + 1].t - traj.records[i - 1].t);
    const double z2 = cur[0] * cur[0] + cur[1] * cur[1];
    const double expected = -z2 / mu;
    worst = std::max(worst, std::abs(rate - expected) / std::abs(expected));
  }
  return {"observer_decay", worst <= tol,
          fmt("max relative error %.3g (tol %.3g)", worst, tol)};
}

CheckResult check_free_decay_monitor() {
  const ScenarioResult res = run_scenario(preset_free_decay());
  if (!res.trajectory.completed() || !res.report) {
    return {"free_decay_monitor", false, "run failed: " + res.trajectory.message};
  }
  const std::size_t n = res.report->violations.size();
  return {"free_decay_monitor", n == 0, std::to_string(n) + " violations"};
}

CheckResult check_model_consistency() {
  const ScenarioConfig cfg = preset_compare();
  const CompareReport rep = compare_models(cfg);
  const double dev_tol = 50.0 * cfg.solver.rtol;
  const double res_tol = 1e-6;
  const bool ok = rep.full_status == Trajectory::Status::kCompleted &&
                  rep.reduced_status == Trajectory::Status::kCompleted &&
                  rep.deviation <= dev_tol && rep.gamma_residual <= res_tol;
  return {"model_consistency", ok,
          fmt("deviation %.3g, gamma residual %.3g", rep.deviation, rep.gamma_residual)};
}

std::vector<CheckResult> verify_suite(std::string_view suite) {
  const bool all = suite == "all";
  if (!all && suite != "transforms" && suite != "lyapunov" && suite != "consistency") {
    throw ParameterError("suite: expected transforms, lyapunov, consistency or all");
  }
  std::vector<CheckResult> out;
  if (all || suite == "transforms") {
    out.push_back(check_beta_round_trip());
    out.push_back(check_state_round_trip());
  }
  if (all || suite == "lyapunov") {
    out.push_back(check_angle_lyapunov_grid());
    out.push_back(check_observer_decay());
    out.push_back(check_free_decay_monitor());
  }
  if (all || suite == "consistency") {
    out.push_back(check_model_consistency());
  }
  return out;
}

}  // namespace pendsim
