#pragma once

#include <array>

#include "pendsim/model.hpp"
#include "pendsim/transform.hpp"

namespace pendsim {

using ControlComponents = std::array<double, kNumControlTerms>;

/// Output of the relay du = PiBar sign(gamma).
///
/// On the switching surface the sign is set-valued: any value in
/// [-PiBar, PiBar] is admissible and the solver picks the equivalent control.
struct RelayOutput {
  enum class Kind { kPositive, kNegative, kSetValued };
  Kind kind = Kind::kSetValued;
  double value = 0.0;  ///< +-PiBar when saturated; 0 (meaningless) otherwise
  double bound = 0.0;  ///< PiBar

  bool saturated() const { return kind != Kind::kSetValued; }
};

struct ControlBreakdown {
  ControlComponents u_components{};
  double u_bar = 0.0;
  double delta_u = 0.0;
  double total = 0.0;
};

/// The eleven state functions u_1..u_11 whose lambda-weighted sum is the
/// stabilizing control. `y` must be full_to_reduced(x).
///
///   u1 = r'            u2 = r' cos^2 b      u3 = b'^2 sin b
///   u4 = b' cos b      u5 = sin 2b          u6 = b'/cos b = Omega'
///   u7 = tan b         u8 = a s' + rho b'^2 sin b / cos^2 b
///   u9 = (b' sin 2b - a cos^2 b) s' - rho b'^2 sin b
///   u10 = s' + a s     u11 = (s' + a s) cos^2 b - s b' sin 2b
ControlComponents u_components(const FullState& x, const ReducedState& y,
                               const ControllerParams& ctrl,
                               const PhysicalParams& phys);

/// sum_i lambda_i u_i.
double u_bar(const ControlComponents& components,
             const DerivedConstants& consts);

/// Saturated for |gamma| > surface_tol, set-valued otherwise.
RelayOutput relay(double gamma, double PiBar, double surface_tol = 0.0);

/// Same basis as u_components with the velocities (r', beta') replaced by
/// observer estimates (zhat1, zhat2) and s' by zhat1 + rho zhat2 / cos b.
/// Positions (r, beta, s) are taken as exactly measured.
ControlComponents observer_components(double r, double beta, double zhat1,
                                      double zhat2, const ReducedState& y,
                                      const ControllerParams& ctrl,
                                      const PhysicalParams& phys);

ControlBreakdown make_breakdown(const ControlComponents& components,
                                const DerivedConstants& consts,
                                double delta_u);

}  // namespace pendsim
