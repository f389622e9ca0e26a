#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pendsim/model.hpp"
#include "pendsim/solver.hpp"
#include "pendsim/transform.hpp"

namespace pendsim {

/// V(s, gamma) = s^2 + k gamma^2.
double position_lyapunov(double s, double gamma, double k);

/// W(Omega, Omega') = Omega'^2 / cos^(q-2) b + r / cos^(q-1) b - r with
/// b = beta(Omega) and r = r_const. Nonnegative, zero only at the origin.
double angle_lyapunov(double Omega, double OmegaDot, double q, double r_const);

struct ComparisonValues {
  double psi_cmp = 0.0;  ///< epsilon (s^2 + gamma^2)
  double eta = 0.0;      ///< 2 a Omega'^2 / cos^(q-2) b
};

ComparisonValues comparison_functions(const ReducedState& x,
                                      const ControllerParams& ctrl,
                                      const DerivedConstants& consts);

/// <z, B z> with B = E/2: for z' = -z/mu its derivative is -|z|^2/mu.
double observer_lyapunov(double z1, double z2);

struct LyapunovSample {
  double t = 0.0;
  double V = 0.0;
  double W = 0.0;
  double psi_cmp = 0.0;
  double eta = 0.0;
  std::optional<double> W_z;    ///< observer runs only
  std::optional<double> W_rho;  ///< V + rho_composite W_z
  double dVdt = 0.0;
  std::optional<double> dWrho_dt;
};

struct Violation {
  double t = 0.0;
  std::string condition;  ///< "W_negative" or "W_rho_increase"
  double margin = 0.0;    ///< amount by which the condition is exceeded
};

struct MonitorOptions {
  double w_floor = -1e-12;
  /// Integration tolerances; a W_rho increase below
  /// 10 (atol + rtol |W_rho|) is attributed to integration error.
  double rtol = 1e-8;
  double atol = 1e-10;
};

struct LyapunovReport {
  std::vector<LyapunovSample> samples;
  std::vector<Violation> violations;
  /// max over samples of dV/dt + psi_cmp. Reported, not enforced.
  double max_dissipation_margin = 0.0;
};

/// Evaluates every function on each record and differentiates V and W_rho
/// numerically (central differences, one-sided next to a mode change).
/// Throws ParameterError for fewer than 3 records.
LyapunovReport monitor(const Trajectory& traj, const ControllerParams& ctrl,
                       const DerivedConstants& consts,
                       const MonitorOptions& opts = {});

/// Re-derives the violation list from the sample values.
std::vector<Violation> find_violations(const std::vector<LyapunovSample>& samples,
                                       const Trajectory& traj,
                                       const MonitorOptions& opts = {});

}  // namespace pendsim
