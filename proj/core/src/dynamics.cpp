#include "pendsim/dynamics.hpp"

#include <cmath>
#include <string>

#include "pendsim/errors.hpp"

namespace pendsim {

double Disturbance::bound() const {
  switch (kind) {
    case Kind::kZero:
      return 0.0;
    case Kind::kConstant:
      return std::abs(value);
    case Kind::kSinusoid:
      return std::abs(amplitude);
  }
  return 0.0;
}

double disturbance_eval(const Disturbance& d, double t) {
  switch (d.kind) {
    case Disturbance::Kind::kZero:
      return 0.0;
    case Disturbance::Kind::kConstant:
      return d.value;
    case Disturbance::Kind::kSinusoid:
      return d.amplitude * std::sin(d.angular_frequency * t + d.phase);
  }
  return 0.0;
}

ReducedModel make_reduced_model(
    const PhysicalParams& phys, const ControllerParams& ctrl,
    const std::optional<ConstsOverride>& override_consts) {
  const DerivedConstants k = derive_constants(phys, ctrl);
  ReducedModel m{phys, ctrl, k.d1, k.d2, k.d3, ctrl.A_gain, ctrl.B_gain};
  if (override_consts) {
    m.d1 = override_consts->d1;
    m.d2 = override_consts->d2;
    m.d3 = override_consts->d3;
  }
  return m;
}

ReducedModel make_plant_reduced_model(const PhysicalParams& phys,
                                      const ControllerParams& ctrl) {
  const DerivedConstants k = derive_constants(phys, ctrl);
  return {phys, ctrl, k.d1, k.d2, k.d3, k.A, k.B};
}

double omega_ddot(const ReducedState& y, double gamma_dot,
                  const ReducedModel& model) {
  const PhysicalParams& p = model.phys;
  const double beta = beta_of_omega(y.Omega);
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const double ps = psi(beta, p);
  const double psi_dot = psi_time_derivative(beta, y.OmegaDot * cb, p);
  const double sdot = y.gamma / ps - model.ctrl.alpha * y.s;
  const double span = model.ctrl.rho * p.L - p.I;
  // (L s'' + kappa s') / (rho L - I) with s'' taken from s' = gamma/psi - alpha s.
  const double forcing =
      (p.L * (gamma_dot * ps - y.gamma * psi_dot) / (ps * ps) +
       (p.kappa - model.ctrl.alpha * p.L) * sdot) /
      span;
  return -model.d1 * y.OmegaDot - model.d2 * (sb / cb) -
         model.d3 * y.OmegaDot * y.OmegaDot * sb + forcing;
}

ReducedState reduced_rhs(const ReducedState& y, double delta_u, double D,
                         const ReducedModel& model) {
  const double beta = beta_of_omega(y.Omega);
  const double gamma_dot =
      -model.ctrl.a * y.gamma - model.A * delta_u - model.B * D;
  return {y.gamma / psi(beta, model.phys) - model.ctrl.alpha * y.s, gamma_dot,
          y.OmegaDot, omega_ddot(y, gamma_dot, model)};
}

double equivalent_control(double D, const ReducedModel& model) {
  if (model.A == 0.0) {
    return 0.0;
  }
  return -model.B * D / model.A;
}

bool sliding_admissible(double D, const ReducedModel& model) {
  return model.A > 0.0 &&
         std::abs(equivalent_control(D, model)) <= model.ctrl.PiBar;
}

ReducedState sliding_rhs(const ReducedState& y, double D,
                         const ReducedModel& model) {
  if (!sliding_admissible(D, model)) {
    throw DomainError("sliding_rhs: sliding infeasible, |B D / A| = " +
                      std::to_string(std::abs(equivalent_control(D, model))) +
                      " exceeds PiBar");
  }
  return surface_rhs(y, model);
}

ReducedState surface_rhs(const ReducedState& y, const ReducedModel& model) {
  ReducedState on_surface = y;
  on_surface.gamma = 0.0;
  return {-model.ctrl.alpha * y.s, 0.0, y.OmegaDot,
          omega_ddot(on_surface, 0.0, model)};
}

namespace {

struct ObserverEval {
  FullState full;
  double u_applied;  // without delta_u
  double u_exact;    // sum lambda_i u_i with true velocities
};

ObserverEval evaluate_observer(const SingularState& w,
                               const ReducedModel& model,
                               const DerivedConstants& consts) {
  const FullState full = reduced_to_full(w.x, model.ctrl, model.phys);
  const ControlComponents exact =
      u_components(full, w.x, model.ctrl, model.phys);
  const ControlComponents estimated = observer_components(
      full.r, full.beta, full.rdot + w.z1, full.betadot + w.z2, w.x,
      model.ctrl, model.phys);
  return {full, u_bar(estimated, consts), u_bar(exact, consts)};
}

}  // namespace

double observer_control(const SingularState& w, const ReducedModel& model,
                        const DerivedConstants& consts) {
  return evaluate_observer(w, model, consts).u_applied;
}

SingularDerivative singular_rhs(const SingularState& w,
                                const ReducedModel& model,
                                const DerivedConstants& consts, double D,
                                double delta_u) {
  if (!(w.mu > 0.0)) {
    throw ParameterError("singular_rhs: mu must be > 0");
  }
  const ObserverEval ev = evaluate_observer(w, model, consts);
  // gamma' + a gamma = A (u_exact - u) - B D with u = u_applied + delta_u.
  const double gamma_dot = -model.ctrl.a * w.x.gamma -
                           model.A * (ev.u_applied - ev.u_exact) -
                           model.A * delta_u - model.B * D;
  const double beta = ev.full.beta;
  SingularDerivative out;
  out.dx = {w.x.gamma / psi(beta, model.phys) - model.ctrl.alpha * w.x.s,
            gamma_dot, w.x.OmegaDot, omega_ddot(w.x, gamma_dot, model)};
  const Accelerations acc =
      accelerations(ev.full, ev.u_applied + delta_u, D, model.phys);
  out.dz1 = -w.z1 / w.mu - acc.rddot;
  out.dz2 = -w.z2 / w.mu - acc.betaddot;
  return out;
}

}  // namespace pendsim
