#pragma once

#include <array>

namespace pendsim {

/// Physical coefficients of the cart-pendulum plant.
///
/// The defaults form a complete parameter set for which the derived
/// angle-dynamics coefficients d1 = d2 = d3 = 1 exactly (with rho = 2).
struct PhysicalParams {
  double M = 1.5;      ///< cart mass
  double L = 1.0;      ///< coupling m*l
  double I = 1.0;      ///< pendulum inertia J + m*l^2
  double N = 1.0;      ///< cart friction
  double kappa = 1.0;  ///< pendulum-cart friction coupling
  double c = 1.0;      ///< rotational damping c0 + kappa*l
  double G = 1.0;      ///< motor gain
  double g = 1.0;      ///< gravitational acceleration
  double Pi = 1.0;     ///< disturbance bound, |D(t)| <= Pi

  /// Throws ParameterError naming the offending field.
  void validate() const;

  bool operator==(const PhysicalParams&) const = default;
};

/// Controller and Lyapunov-analysis parameters.
struct ControllerParams {
  double a = 0.5;       ///< filter pole
  double alpha = 1.0;   ///< position pole
  double b = 0.0;       ///< residual gain; only b = 0 is simulated
  double rho = 2.0;     ///< transform gain
  double k = 0.1;       ///< weight of gamma^2 in V
  double epsilon = 1.0; ///< comparison-function gain
  double PiBar = 1.0;   ///< relay amplitude
  double A_gain = 0.0;  ///< relay channel gain (reduced model)
  double B_gain = 0.0;  ///< disturbance channel gain (reduced model)
  double rho_composite = 1.0;  ///< weight of the observer quadratic in W_rho

  void validate() const;

  bool operator==(const ControllerParams&) const = default;
};

inline constexpr std::size_t kNumControlTerms = 11;

struct DerivedConstants {
  double A = 0.0;  ///< |G (I - rho L)|
  double B = 0.0;  ///< A / G
  std::array<double, kNumControlTerms> lambda{};
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double q = 0.0;
  double r_const = 0.0;
  double rhoL_minus_I = 0.0;

  bool operator==(const DerivedConstants&) const = default;
};

/// Plant state in physical coordinates. |beta| < pi/2.
struct FullState {
  double r = 0.0;
  double rdot = 0.0;
  double beta = 0.0;
  double betadot = 0.0;

  bool operator==(const FullState&) const = default;
};

struct Accelerations {
  double rddot = 0.0;
  double betaddot = 0.0;
};

/// Computes every constant of the closed loop from the raw parameters.
///
/// The lambda coefficients are the ones for which sum(lambda_i u_i) makes
/// gamma' + a gamma = -A du - B D hold identically along the plant
/// (see control.hpp for the matching u_i). Throws ParameterError when
/// rho L <= I or M I <= L^2.
DerivedConstants derive_constants(const PhysicalParams& phys,
                                  const ControllerParams& ctrl);

/// psi(beta) = M I - L^2 cos^2(beta), the determinant of the mass matrix.
double psi(double beta, const PhysicalParams& phys);

/// d/dt psi(beta(t)) = L^2 sin(2 beta) * betadot.
double psi_time_derivative(double beta, double betadot,
                           const PhysicalParams& phys);

/// Solves the 2x2 mass-matrix system for (r'', beta'') under control u and
/// disturbance D.
Accelerations accelerations(const FullState& x, double u, double D,
                            const PhysicalParams& phys);

/// First-order form (r', r'', beta', beta'') packed as a FullState.
FullState full_rhs(const FullState& x, double u, double D,
                   const PhysicalParams& phys);

}  // namespace pendsim
