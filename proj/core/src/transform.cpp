#include "pendsim/transform.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pendsim/errors.hpp"

namespace pendsim {
namespace {

void check_beta(double beta, const char* where) {
  if (!std::isfinite(beta) ||
      std::abs(beta) >= std::numbers::pi / 2 - kBetaBoundaryGuard) {
    throw DomainError(std::string(where) + ": |beta| must be < pi/2, got " +
                      std::to_string(beta));
  }
}

}  // namespace

// Both maps are the Gudermannian pair: -ln tan(pi/4 - b/2) = asinh(tan b)
// and 2 (pi/4 - atan(e^-W)) = atan(sinh W). The hyperbolic forms avoid the
// cancellation near zero.
double omega_of_beta(double beta) {
  check_beta(beta, "omega_of_beta");
  return std::asinh(std::tan(beta));
}

double beta_of_omega(double Omega) { return std::atan(std::sinh(Omega)); }

ReducedState full_to_reduced(const FullState& x, const ControllerParams& ctrl,
                             const PhysicalParams& phys) {
  check_beta(x.beta, "full_to_reduced");
  const double Omega = std::asinh(std::tan(x.beta));
  const double OmegaDot = x.betadot / std::cos(x.beta);
  const double s = x.r + ctrl.rho * Omega;
  const double sdot = x.rdot + ctrl.rho * OmegaDot;
  return {s, psi(x.beta, phys) * (sdot + ctrl.alpha * s), Omega, OmegaDot};
}

FullState reduced_to_full(const ReducedState& y, const ControllerParams& ctrl,
                          const PhysicalParams& phys) {
  const double beta = beta_of_omega(y.Omega);
  const double sdot = y.gamma / psi(beta, phys) - ctrl.alpha * y.s;
  return {y.s - ctrl.rho * y.Omega, sdot - ctrl.rho * y.OmegaDot, beta,
          y.OmegaDot * std::cos(beta)};
}

}  // namespace pendsim
