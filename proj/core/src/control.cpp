#include "pendsim/control.hpp"

#include <cmath>
#include <numbers>

#include "pendsim/errors.hpp"

namespace pendsim {
namespace {

ControlComponents evaluate(double beta, double rdot, double betadot,
                           double s, double sdot, const ControllerParams& ctrl) {
  if (!std::isfinite(beta) ||
      std::abs(beta) >= std::numbers::pi / 2 - kBetaBoundaryGuard) {
    throw DomainError("u_components: |beta| must be < pi/2");
  }
  const double sb = std::sin(beta);
  const double cb = std::cos(beta);
  const double cb2 = cb * cb;
  const double s2b = std::sin(2.0 * beta);
  const double bd2 = betadot * betadot;
  const double a = ctrl.a;
  const double rho = ctrl.rho;
  return {
      rdot,
      rdot * cb2,
      bd2 * sb,
      betadot * cb,
      s2b,
      betadot / cb,
      std::tan(beta),
      a * sdot + rho * bd2 * sb / cb2,
      (betadot * s2b - a * cb2) * sdot - rho * bd2 * sb,
      sdot + a * s,
      (sdot + a * s) * cb2 - s * betadot * s2b,
  };
}

}  // namespace

ControlComponents u_components(const FullState& x, const ReducedState& y,
                               const ControllerParams& ctrl,
                               const PhysicalParams& /*phys*/) {
  const double sdot = x.rdot + ctrl.rho * y.OmegaDot;
  return evaluate(x.beta, x.rdot, x.betadot, y.s, sdot, ctrl);
}

double u_bar(const ControlComponents& components,
             const DerivedConstants& consts) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumControlTerms; ++i) {
    sum += consts.lambda[i] * components[i];
  }
  return sum;
}

RelayOutput relay(double gamma, double PiBar, double surface_tol) {
  if (gamma > surface_tol) {
    return {RelayOutput::Kind::kPositive, PiBar, PiBar};
  }
  if (gamma < -surface_tol) {
    return {RelayOutput::Kind::kNegative, -PiBar, PiBar};
  }
  return {RelayOutput::Kind::kSetValued, 0.0, PiBar};
}

ControlComponents observer_components(double /*r*/, double beta, double zhat1,
                                      double zhat2, const ReducedState& y,
                                      const ControllerParams& ctrl,
                                      const PhysicalParams& /*phys*/) {
  const double zhat3 = zhat1 + ctrl.rho * zhat2 / std::cos(beta);
  return evaluate(beta, zhat1, zhat2, y.s, zhat3, ctrl);
}

ControlBreakdown make_breakdown(const ControlComponents& components,
                                const DerivedConstants& consts,
                                double delta_u) {
  ControlBreakdown out;
  out.u_components = components;
  out.u_bar = u_bar(components, consts);
  out.delta_u = delta_u;
  out.total = out.u_bar + out.delta_u;
  return out;
}

}  // namespace pendsim
