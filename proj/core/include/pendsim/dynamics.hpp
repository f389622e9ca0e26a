#pragma once

#include <optional>

#include "pendsim/control.hpp"
#include "pendsim/model.hpp"
#include "pendsim/transform.hpp"

namespace pendsim {

/// Bounded exogenous force D(t) acting on the cart.
struct Disturbance {
  enum class Kind { kZero, kConstant, kSinusoid };
  Kind kind = Kind::kZero;
  double value = 0.0;              ///< kConstant
  double amplitude = 0.0;          ///< kSinusoid
  double angular_frequency = 0.0;  ///< kSinusoid
  double phase = 0.0;              ///< kSinusoid

  static Disturbance zero() { return {}; }
  static Disturbance constant(double v) { return {Kind::kConstant, v}; }
  static Disturbance sinusoid(double amplitude, double omega, double phase) {
    return {Kind::kSinusoid, 0.0, amplitude, omega, phase};
  }

  /// sup_t |D(t)|.
  double bound() const;

  bool operator==(const Disturbance&) const = default;
};

double disturbance_eval(const Disturbance& d, double t);

/// Direct angle-dynamics coefficients, replacing the derived d1..d3.
struct ConstsOverride {
  double d1 = 1.0;
  double d2 = 1.0;
  double d3 = 1.0;

  bool operator==(const ConstsOverride&) const = default;
};

/// Everything the transformed-chart vector fields need.
///
/// `A` and `B` are the relay and disturbance channel gains seen by the
/// gamma equation. For the reduced model they come straight from
/// ControllerParams::A_gain / B_gain; models tied to the physical plant use
/// the derived values.
struct ReducedModel {
  PhysicalParams phys;
  ControllerParams ctrl;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double A = 0.0;
  double B = 0.0;
};

/// Reduced model with A = ctrl.A_gain, B = ctrl.B_gain and d1..d3 taken
/// from `override_consts` when given, otherwise derived.
ReducedModel make_reduced_model(const PhysicalParams& phys,
                                const ControllerParams& ctrl,
                                const std::optional<ConstsOverride>& override_consts);

/// Model whose gains and coefficients all follow from the physical
/// parameters; this is the reduction of the plant under u = u_bar + du.
ReducedModel make_plant_reduced_model(const PhysicalParams& phys,
                                      const ControllerParams& ctrl);

/// Omega'' given gamma', from the plant's pendulum equation written in the
/// transformed chart.
double omega_ddot(const ReducedState& y, double gamma_dot,
                  const ReducedModel& model);

/// Closed-loop vector field in (s, gamma, Omega, Omega') with a resolved
/// relay value `delta_u`.
ReducedState reduced_rhs(const ReducedState& y, double delta_u, double D,
                         const ReducedModel& model);

/// du_eq = -B D / A, the relay value that keeps gamma' = 0.
double equivalent_control(double D, const ReducedModel& model);

/// True when |du_eq| <= PiBar (and A > 0).
bool sliding_admissible(double D, const ReducedModel& model);

/// Vector field restricted to gamma = 0. The gamma component is exactly 0.
/// Throws DomainError if sliding is infeasible for this D.
ReducedState sliding_rhs(const ReducedState& y, double D,
                         const ReducedModel& model);

/// sliding_rhs without the feasibility check.
ReducedState surface_rhs(const ReducedState& y, const ReducedModel& model);

/// Reduced state augmented with the velocity-estimate errors
/// z1 = zhat1 - r', z2 = zhat2 - beta' of a first-order observer with time
/// constant mu.
struct SingularState {
  ReducedState x;
  double z1 = 0.0;
  double z2 = 0.0;
  double mu = 0.1;
};

struct SingularDerivative {
  ReducedState dx;
  double dz1 = 0.0;
  double dz2 = 0.0;
};

/// Six-state system of plant plus observer.
///
/// The applied control is sum_i lambda_i uhat_i + delta_u where uhat_i are
/// the observer components. Requires a plant model
/// (make_plant_reduced_model). Throws ParameterError for mu <= 0.
SingularDerivative singular_rhs(const SingularState& w,
                                const ReducedModel& model,
                                const DerivedConstants& consts, double D,
                                double delta_u);

/// The applied control of the singular system at state `w` (without du).
double observer_control(const SingularState& w, const ReducedModel& model,
                        const DerivedConstants& consts);

}  // namespace pendsim
