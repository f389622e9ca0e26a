#pragma once

#include "pendsim/model.hpp"

namespace pendsim {

/// State in the transformed chart (s, gamma, Omega, Omega').
struct ReducedState {
  double s = 0.0;
  double gamma = 0.0;
  double Omega = 0.0;
  double OmegaDot = 0.0;

  bool operator==(const ReducedState&) const = default;
};

/// Inputs closer than this to |beta| = pi/2 are rejected.
inline constexpr double kBetaBoundaryGuard = 1e-9;

/// Omega(beta) = -ln tan(pi/4 - beta/2). Odd, strictly increasing,
/// dOmega/dbeta = 1/cos(beta). Throws DomainError near |beta| = pi/2.
double omega_of_beta(double beta);

/// beta(Omega) = 2 (pi/4 - atan(exp(-Omega))), the exact inverse.
double beta_of_omega(double Omega);

ReducedState full_to_reduced(const FullState& x, const ControllerParams& ctrl,
                             const PhysicalParams& phys);

/// Inverse of full_to_reduced; s' is recovered as gamma/psi(beta) - alpha s.
FullState reduced_to_full(const ReducedState& y, const ControllerParams& ctrl,
                          const PhysicalParams& phys);

}  // namespace pendsim
