#pragma once

#include <span>

#include "pendsim/dynamics.hpp"
#include "pendsim/solver.hpp"

namespace pendsim {

/// (s, gamma, Omega, Omega') under the relay, with directly specified gains.
class ReducedSystem final : public SwitchedSystem {
 public:
  ReducedSystem(ReducedModel model, Disturbance disturbance);

  std::size_t dimension() const override { return 4; }
  void rhs(double t, std::span<const double> y, double delta_u,
           std::span<double> dydt) const override;
  void sliding_rhs(double t, std::span<const double> y, double delta_u_eq,
                   std::span<double> dydt) const override;
  double equivalent_control(double t, std::span<const double> y) const override;
  double relay_amplitude() const override { return model_.ctrl.PiBar; }
  bool relay_active() const override;
  double disturbance(double t) const override;
  Observation observe(double t, std::span<const double> y) const override;

  const ReducedModel& model() const { return model_; }

 private:
  ReducedModel model_;
  Disturbance disturbance_;
};

/// (s, gamma, Omega, Omega', z1, z2): plant driven through a first-order
/// velocity observer with time constant mu.
class SingularSystem final : public SwitchedSystem {
 public:
  SingularSystem(const PhysicalParams& phys, const ControllerParams& ctrl,
                 double mu, Disturbance disturbance, bool relay_enabled);
  /// As above with d1..d3 replaced by `override_consts` when given.
  SingularSystem(const PhysicalParams& phys, const ControllerParams& ctrl,
                 const std::optional<ConstsOverride>& override_consts,
                 double mu, Disturbance disturbance, bool relay_enabled);

  std::size_t dimension() const override { return 6; }
  void rhs(double t, std::span<const double> y, double delta_u,
           std::span<double> dydt) const override;
  double relay_amplitude() const override { return model_.ctrl.PiBar; }
  bool relay_active() const override;
  double disturbance(double t) const override;
  /// mu/2 inside the boundary layer t < 5 mu.
  double max_step(double t) const override;
  Observation observe(double t, std::span<const double> y) const override;

  double mu() const { return mu_; }

 private:
  ReducedModel model_;
  DerivedConstants consts_;
  double mu_;
  Disturbance disturbance_;
  bool relay_enabled_;
};

/// (r, r', beta, beta') driven by u = u_bar(x) + delta_u. The relay channel
/// is not modelled in this chart.
class FullSystem final : public SwitchedSystem {
 public:
  FullSystem(const PhysicalParams& phys, const ControllerParams& ctrl,
             Disturbance disturbance);

  std::size_t dimension() const override { return 4; }
  void rhs(double t, std::span<const double> y, double delta_u,
           std::span<double> dydt) const override;
  double relay_amplitude() const override { return 0.0; }
  bool relay_active() const override { return false; }
  double disturbance(double t) const override;
  Observation observe(double t, std::span<const double> y) const override;

  /// gamma' along the plant, by the chain rule through the transform.
  double gamma_rate(double t, std::span<const double> y) const;

  const ControllerParams& ctrl() const { return ctrl_; }

 private:
  PhysicalParams phys_;
  ControllerParams ctrl_;
  DerivedConstants consts_;
  Disturbance disturbance_;
};

inline ReducedState as_reduced(std::span<const double> y) {
  return {y[0], y[1], y[2], y[3]};
}
inline FullState as_full(std::span<const double> y) {
  return {y[0], y[1], y[2], y[3]};
}

}  // namespace pendsim
