#include "pendsim/closed_loop.hpp"

#include <cmath>
#include <utility>

#include "pendsim/control.hpp"
#include "pendsim/errors.hpp"

namespace pendsim {
namespace {

void store(const ReducedState& d, std::span<double> out) {
  out[0] = d.s;
  out[1] = d.gamma;
  out[2] = d.Omega;
  out[3] = d.OmegaDot;
}

}  // namespace

ReducedSystem::ReducedSystem(ReducedModel model, Disturbance disturbance)
    : model_(std::move(model)), disturbance_(disturbance) {}

void ReducedSystem::rhs(double t, std::span<const double> y, double delta_u,
                        std::span<double> dydt) const {
  store(reduced_rhs(as_reduced(y), delta_u, disturbance(t), model_), dydt);
}

void ReducedSystem::sliding_rhs(double /*t*/, std::span<const double> y,
                                double /*delta_u_eq*/,
                                std::span<double> dydt) const {
  store(surface_rhs(as_reduced(y), model_), dydt);
}

double ReducedSystem::equivalent_control(double t,
                                         std::span<const double> /*y*/) const {
  return pendsim::equivalent_control(disturbance(t), model_);
}

bool ReducedSystem::relay_active() const {
  return model_.A > 0.0 && model_.ctrl.PiBar > 0.0;
}

double ReducedSystem::disturbance(double t) const {
  return disturbance_eval(disturbance_, t);
}

Observation ReducedSystem::observe(double /*t*/,
                                   std::span<const double> y) const {
  const ReducedState x = as_reduced(y);
  return {x, reduced_to_full(x, model_.ctrl, model_.phys), std::nullopt,
          std::nullopt};
}

SingularSystem::SingularSystem(const PhysicalParams& phys,
                               const ControllerParams& ctrl, double mu,
                               Disturbance disturbance, bool relay_enabled)
    : model_(make_plant_reduced_model(phys, ctrl)),
      consts_(derive_constants(phys, ctrl)),
      mu_(mu),
      disturbance_(disturbance),
      relay_enabled_(relay_enabled) {
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw ParameterError("mu: must be finite and > 0");
  }
}

SingularSystem::SingularSystem(const PhysicalParams& phys,
                               const ControllerParams& ctrl,
                               const std::optional<ConstsOverride>& override_consts,
                               double mu, Disturbance disturbance,
                               bool relay_enabled)
    : SingularSystem(phys, ctrl, mu, disturbance, relay_enabled) {
  if (override_consts) {
    model_.d1 = override_consts->d1;
    model_.d2 = override_consts->d2;
    model_.d3 = override_consts->d3;
  }
}

void SingularSystem::rhs(double t, std::span<const double> y, double delta_u,
                         std::span<double> dydt) const {
  const SingularState w{as_reduced(y), y[4], y[5], mu_};
  const SingularDerivative d =
      singular_rhs(w, model_, consts_, disturbance(t), delta_u);
  store(d.dx, dydt);
  dydt[4] = d.dz1;
  dydt[5] = d.dz2;
}

bool SingularSystem::relay_active() const {
  return relay_enabled_ && model_.A > 0.0 && model_.ctrl.PiBar > 0.0;
}

double SingularSystem::disturbance(double t) const {
  return disturbance_eval(disturbance_, t);
}

double SingularSystem::max_step(double t) const {
  if (t < 5.0 * mu_) {
    return 0.5 * mu_;
  }
  return SwitchedSystem::max_step(t);
}

Observation SingularSystem::observe(double /*t*/,
                                    std::span<const double> y) const {
  const SingularState w{as_reduced(y), y[4], y[5], mu_};
  Observation obs;
  obs.x = w.x;
  obs.full = reduced_to_full(w.x, model_.ctrl, model_.phys);
  obs.u_bar = observer_control(w, model_, consts_);
  obs.z = std::array<double, 2>{y[4], y[5]};
  return obs;
}

FullSystem::FullSystem(const PhysicalParams& phys, const ControllerParams& ctrl,
                       Disturbance disturbance)
    : phys_(phys),
      ctrl_(ctrl),
      consts_(derive_constants(phys, ctrl)),
      disturbance_(disturbance) {}

void FullSystem::rhs(double t, std::span<const double> y, double delta_u,
                     std::span<double> dydt) const {
  const FullState x = as_full(y);
  const ReducedState red = full_to_reduced(x, ctrl_, phys_);
  const double u = u_bar(u_components(x, red, ctrl_, phys_), consts_) + delta_u;
  const FullState d = full_rhs(x, u, disturbance(t), phys_);
  dydt[0] = d.r;
  dydt[1] = d.rdot;
  dydt[2] = d.beta;
  dydt[3] = d.betadot;
}

double FullSystem::disturbance(double t) const {
  return disturbance_eval(disturbance_, t);
}

Observation FullSystem::observe(double /*t*/, std::span<const double> y) const {
  const FullState x = as_full(y);
  const ReducedState red = full_to_reduced(x, ctrl_, phys_);
  Observation obs;
  obs.x = red;
  obs.full = x;
  obs.u_bar = u_bar(u_components(x, red, ctrl_, phys_), consts_);
  return obs;
}

double FullSystem::gamma_rate(double t, std::span<const double> y) const {
  const FullState x = as_full(y);
  std::array<double, 4> d{};
  rhs(t, y, 0.0, d);
  const double rddot = d[1];
  const double bddot = d[3];
  const double cb = std::cos(x.beta);
  const double sb = std::sin(x.beta);
  const double Omega = omega_of_beta(x.beta);
  const double s = x.r + ctrl_.rho * Omega;
  const double Omegadot = x.betadot / cb;
  const double sdot = x.rdot + ctrl_.rho * Omegadot;
  const double Omegaddot = bddot / cb + x.betadot * x.betadot * sb / (cb * cb);
  const double sddot = rddot + ctrl_.rho * Omegaddot;
  return psi_time_derivative(x.beta, x.betadot, phys_) *
             (sdot + ctrl_.alpha * s) +
         psi(x.beta, phys_) * (sddot + ctrl_.alpha * sdot);
}

}  // namespace pendsim
