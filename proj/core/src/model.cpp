#include "pendsim/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pendsim/errors.hpp"

namespace pendsim {
namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) {
    throw ParameterError(std::string(field) + ": " + what);
  }
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void PhysicalParams::validate() const {
  require(finite(M) && M > 0, "phys.M", "must be finite and > 0");
  require(finite(L) && L > 0, "phys.L", "must be finite and > 0");
  require(finite(I) && I > 0, "phys.I", "must be finite and > 0");
  require(finite(N) && N > 0, "phys.N", "must be finite and > 0");
  require(finite(kappa) && kappa > 0, "phys.kappa", "must be finite and > 0");
  require(finite(c), "phys.c", "must be finite");
  require(finite(G) && G > 0, "phys.G", "must be finite and > 0");
  require(finite(g) && g > 0, "phys.g", "must be finite and > 0");
  require(finite(Pi) && Pi >= 0, "phys.Pi", "must be finite and >= 0");
  require(M * I - L * L > 0, "phys.M", "M*I - L^2 must be > 0");
}

void ControllerParams::validate() const {
  require(finite(a) && a > 0, "ctrl.a", "must be finite and > 0");
  require(finite(alpha) && alpha > 0, "ctrl.alpha", "must be finite and > 0");
  require(finite(b) && b == 0.0, "ctrl.b",
          "only the b = 0 closed loop is supported");
  require(finite(rho) && rho > 0, "ctrl.rho", "must be finite and > 0");
  require(finite(k) && k > 0, "ctrl.k", "must be finite and > 0");
  require(finite(epsilon) && epsilon > 0, "ctrl.epsilon",
          "must be finite and > 0");
  require(finite(PiBar) && PiBar >= 0, "ctrl.PiBar", "must be finite and >= 0");
  require(finite(A_gain) && A_gain >= 0, "ctrl.A_gain",
          "must be finite and >= 0");
  require(finite(B_gain) && B_gain >= 0, "ctrl.B_gain",
          "must be finite and >= 0");
  require(finite(rho_composite) && rho_composite > 0, "ctrl.rho_composite",
          "must be finite and > 0");
}

DerivedConstants derive_constants(const PhysicalParams& phys,
                                  const ControllerParams& ctrl) {
  phys.validate();
  ctrl.validate();
  const double M = phys.M;
  const double L = phys.L;
  const double I = phys.I;
  const double rho = ctrl.rho;
  const double span = rho * L - I;
  require(span > 0, "ctrl.rho", "rho*L must exceed I");

  DerivedConstants k;
  k.rhoL_minus_I = span;
  k.A = std::abs(phys.G * (I - rho * L));
  k.B = k.A / phys.G;

  const double A = k.A;
  const double alpha = ctrl.alpha;
  // Signs follow from eliminating r'' and beta'' between the plant equations
  // and gamma = psi (s' + alpha s); see control.cpp for the u_i basis.
  k.lambda = {
      -(rho * M * phys.kappa + I * phys.N - rho * phys.N * L) / A,
      L * phys.kappa / A,
      -L / phys.G,
      L * phys.c / A,
      -L * L * phys.g / (2.0 * A),
      -rho * M * phys.c / A,
      rho * L * M * phys.g / A,
      M * I / A,
      L * L / A,
      M * I * alpha / A,
      -alpha * L * L / A,
  };

  k.d1 = (phys.kappa * rho - phys.c) / span;
  k.d2 = L * phys.g / span;
  k.d3 = I / span;
  k.q = 2.0 * rho * L / span;
  k.r_const = 2.0 / (k.q - 1.0) * L * phys.g / span;
  return k;
}

double psi(double beta, const PhysicalParams& phys) {
  const double cb = std::cos(beta);
  return phys.M * phys.I - phys.L * phys.L * cb * cb;
}

double psi_time_derivative(double beta, double betadot,
                           const PhysicalParams& phys) {
  return phys.L * phys.L * std::sin(2.0 * beta) * betadot;
}

Accelerations accelerations(const FullState& x, double u, double D,
                            const PhysicalParams& phys) {
  const double sb = std::sin(x.beta);
  const double cb = std::cos(x.beta);
  const double det = phys.M * phys.I - phys.L * phys.L * cb * cb;
  if (!(std::abs(det) > std::numeric_limits<double>::min() * 1e6)) {
    throw DomainError("accelerations: degenerate mass matrix");
  }
  // [ M      L cb ] [r'' ]   [f1]
  // [ L cb   I    ] [b'' ] = [f2]
  const double f1 = phys.G * u + D - phys.N * x.rdot +
                    phys.L * x.betadot * x.betadot * sb;
  const double f2 = phys.L * phys.g * sb - phys.c * x.betadot -
                    phys.kappa * x.rdot * cb;
  return {(phys.I * f1 - phys.L * cb * f2) / det,
          (phys.M * f2 - phys.L * cb * f1) / det};
}

FullState full_rhs(const FullState& x, double u, double D,
                   const PhysicalParams& phys) {
  const Accelerations acc = accelerations(x, u, D, phys);
  return {x.rdot, acc.rddot, x.betadot, acc.betaddot};
}

}  // namespace pendsim
