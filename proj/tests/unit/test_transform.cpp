#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "pendsim/errors.hpp"
#include "pendsim/model.hpp"
#include "pendsim/transform.hpp"

using namespace pendsim;

TEST(OmegaOfBeta, Values) {
  EXPECT_EQ(omega_of_beta(0.0), 0.0);
  EXPECT_NEAR(omega_of_beta(std::numbers::pi / 3), oracle::kOmegaOfPiOver3, 1e-15);
  EXPECT_NEAR(omega_of_beta(std::numbers::pi / 3), 1.316958, 1e-6);
}

TEST(OmegaOfBeta, Odd) {
  for (double b = -1.5; b <= 1.5; b += 0.05) {
    EXPECT_DOUBLE_EQ(omega_of_beta(-b), -omega_of_beta(b));
  }
}

TEST(OmegaOfBeta, RejectsVerticalAngle) {
  EXPECT_THROW(omega_of_beta(std::numbers::pi / 2), DomainError);
  EXPECT_THROW(omega_of_beta(-2.0), DomainError);
  EXPECT_THROW(omega_of_beta(std::nan("")), DomainError);
}

TEST(BetaOfOmega, Values) {
  EXPECT_EQ(beta_of_omega(0.0), 0.0);
  EXPECT_NEAR(beta_of_omega(1.0), oracle::kBetaOfOne, 1e-15);
  EXPECT_NEAR(beta_of_omega(1.0), 0.865769, 1e-6);
}

TEST(BetaOfOmega, RoundTrip) {
  for (double b : {1.5, -1.5, 1.0, -1.0, 0.5, -0.5, 0.1}) {
    EXPECT_NEAR(beta_of_omega(omega_of_beta(b)), b, 1e-12);
  }
}

TEST(StateCharts, Origin) {
  EXPECT_EQ(full_to_reduced({}, {}, {}), ReducedState{});
  EXPECT_EQ(reduced_to_full({}, {}, {}), FullState{});
}

TEST(StateCharts, PureRotation) {
  const ControllerParams c;
  const PhysicalParams p;
  const ReducedState y = full_to_reduced({0.0, 0.0, 0.0, 1.0}, c, p);
  EXPECT_EQ(y.Omega, 0.0);
  EXPECT_DOUBLE_EQ(y.OmegaDot, 1.0);
  EXPECT_EQ(y.s, 0.0);
  EXPECT_DOUBLE_EQ(y.gamma, psi(0.0, p) * c.rho);
}

TEST(StateCharts, MatchesReference) {
  const ReducedState y = full_to_reduced({0.3, -0.2, 0.4, 0.1}, {}, {});
  EXPECT_NEAR(y.s, oracle::kReduced0, 1e-14);
  EXPECT_NEAR(y.gamma, oracle::kReduced1, 1e-14);
  EXPECT_NEAR(y.Omega, oracle::kReduced2, 1e-14);
  EXPECT_NEAR(y.OmegaDot, oracle::kReduced3, 1e-14);
}

TEST(StateCharts, RoundTripRandom) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0), b(-1.4, 1.4);
  const ControllerParams c;
  const PhysicalParams p;
  for (int i = 0; i < 100; ++i) {
    const FullState x{u(rng), u(rng), b(rng), u(rng)};
    const FullState back = reduced_to_full(full_to_reduced(x, c, p), c, p);
    EXPECT_NEAR(back.r, x.r, 1e-10);
    EXPECT_NEAR(back.rdot, x.rdot, 1e-10);
    EXPECT_NEAR(back.beta, x.beta, 1e-10);
    EXPECT_NEAR(back.betadot, x.betadot, 1e-10);
  }
}

TEST(StateCharts, SDotFromGamma) {
  const ControllerParams c;
  const PhysicalParams p;
  const ReducedState y{-0.7, 0.7, 1.0, 0.5};
  const FullState x = reduced_to_full(y, c, p);
  const double ps = psi(x.beta, p);
  EXPECT_NEAR(ps, oracle::kPsiAtBetaOfOne, 1e-14);
  const double sdot = x.rdot + c.rho * x.betadot / std::cos(x.beta);
  EXPECT_NEAR(sdot, 0.7 / ps + 0.7, 1e-14);
}
