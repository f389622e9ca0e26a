#include "pendsim/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pendsim/errors.hpp"

namespace pendsim {

double position_lyapunov(double s, double gamma, double k) {
  return s * s + k * gamma * gamma;
}

double angle_lyapunov(double Omega, double OmegaDot, double q,
                      double r_const) {
  const double cb = std::cos(beta_of_omega(Omega));
  return OmegaDot * OmegaDot / std::pow(cb, q - 2.0) +
         r_const / std::pow(cb, q - 1.0) - r_const;
}

ComparisonValues comparison_functions(const ReducedState& x,
                                      const ControllerParams& ctrl,
                                      const DerivedConstants& consts) {
  const double cb = std::cos(beta_of_omega(x.Omega));
  return {ctrl.epsilon * (x.s * x.s + x.gamma * x.gamma),
          2.0 * ctrl.a * x.OmegaDot * x.OmegaDot / std::pow(cb, consts.q - 2.0)};
}

double observer_lyapunov(double z1, double z2) {
  return 0.5 * (z1 * z1 + z2 * z2);
}

namespace {

// Derivative of `value` at i, not differencing across a mode change.
template <typename Get>
double derivative(const Trajectory& traj, std::size_t i, Get&& value) {
  const auto& rec = traj.records;
  const std::size_t n = rec.size();
  const bool back = i > 0 && rec[i - 1].mode == rec[i].mode;
  const bool fwd = i + 1 < n && rec[i + 1].mode == rec[i].mode;
  if (back && fwd) {
    return (value(i + 1) - value(i - 1)) / (rec[i + 1].t - rec[i - 1].t);
  }
  if (fwd) {
    return (value(i + 1) - value(i)) / (rec[i + 1].t - rec[i].t);
  }
  if (back) {
    return (value(i) - value(i - 1)) / (rec[i].t - rec[i - 1].t);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<Violation> find_violations(
    const std::vector<LyapunovSample>& samples, const Trajectory& traj,
    const MonitorOptions& opts) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].W >= opts.w_floor)) {
      out.push_back({samples[i].t, "W_negative", opts.w_floor - samples[i].W});
    }
    if (i + 1 >= samples.size() || i + 1 >= traj.records.size()) {
      continue;
    }
    const Record& a = traj.records[i];
    const Record& b = traj.records[i + 1];
    const bool smooth_segment = a.disturbance == 0.0 && b.disturbance == 0.0 &&
                                !a.mode.is_sliding() && !b.mode.is_sliding() &&
                                a.mode == b.mode;
    if (smooth_segment && samples[i].W_rho && samples[i + 1].W_rho) {
      const double w0 = *samples[i].W_rho;
      const double w1 = *samples[i + 1].W_rho;
      const double tol = 10.0 * (opts.atol + opts.rtol * std::abs(w0));
      if (w1 - w0 > tol) {
        out.push_back({samples[i + 1].t, "W_rho_increase", w1 - w0 - tol});
      }
    }
  }
  return out;
}

LyapunovReport monitor(const Trajectory& traj, const ControllerParams& ctrl,
                       const DerivedConstants& consts,
                       const MonitorOptions& opts) {
  if (traj.records.size() < 3) {
    throw ParameterError("monitor: trajectory needs at least 3 records");
  }
  LyapunovReport report;
  report.samples.reserve(traj.records.size());
  for (const Record& rec : traj.records) {
    const ReducedState& x = rec.obs.x;
    LyapunovSample smp;
    smp.t = rec.t;
    smp.V = position_lyapunov(x.s, x.gamma, ctrl.k);
    smp.W = angle_lyapunov(x.Omega, x.OmegaDot, consts.q, consts.r_const);
    const ComparisonValues cmp = comparison_functions(x, ctrl, consts);
    smp.psi_cmp = cmp.psi_cmp;
    smp.eta = cmp.eta;
    if (rec.obs.z) {
      smp.W_z = observer_lyapunov((*rec.obs.z)[0], (*rec.obs.z)[1]);
      smp.W_rho = smp.V + ctrl.rho_composite * *smp.W_z;
    }
    report.samples.push_back(smp);
  }

  auto& s = report.samples;
  report.max_dissipation_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].dVdt = derivative(traj, i, [&](std::size_t j) { return s[j].V; });
    if (s[i].W_rho) {
      s[i].dWrho_dt =
          derivative(traj, i, [&](std::size_t j) { return *s[j].W_rho; });
    }
    if (std::isfinite(s[i].dVdt)) {
      report.max_dissipation_margin =
          std::max(report.max_dissipation_margin, s[i].dVdt + s[i].psi_cmp);
    }
  }
  report.violations = find_violations(s, traj, opts);
  return report;
}

}  // namespace pendsim
