#include <cmath>

#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "pendsim/errors.hpp"
#include "pendsim/experiments.hpp"
#include "pendsim/lyapunov.hpp"

using namespace pendsim;

TEST(PositionLyapunov, Values) {
  EXPECT_EQ(position_lyapunov(0.0, 0.0, 0.1), 0.0);
  EXPECT_NEAR(position_lyapunov(-0.7, 0.7, 0.1), 0.539, 1e-15);
  for (double s = -2.0; s <= 2.0; s += 0.25) {
    for (double g = -2.0; g <= 2.0; g += 0.25) {
      if (s != 0.0 || g != 0.0) {
        EXPECT_GT(position_lyapunov(s, g, 0.1), 0.0);
      }
    }
  }
}

TEST(AngleLyapunov, Values) {
  EXPECT_EQ(angle_lyapunov(0.0, 0.0, 4.0, 2.0 / 3.0), 0.0);
  EXPECT_DOUBLE_EQ(angle_lyapunov(0.0, 0.5, 4.0, 2.0 / 3.0), 0.25);
  EXPECT_NEAR(angle_lyapunov(1.0, 0.0, 4.0, 2.0 / 3.0), oracle::kAngleLyapunovOneZero, 1e-13);
  EXPECT_NEAR(angle_lyapunov(0.5, 0.5, 4.0, 2.0 / 3.0), oracle::kAngleLyapunovHalfHalf, 1e-14);
}

TEST(ComparisonFunctions, Values) {
  const ControllerParams c;
  const DerivedConstants k = derive_constants({}, c);
  const ComparisonValues o = comparison_functions({}, c, k);
  EXPECT_EQ(o.psi_cmp, 0.0);
  EXPECT_EQ(o.eta, 0.0);
  EXPECT_NEAR(comparison_functions({-0.7, 0.7, 0.0, 0.0}, c, k).psi_cmp, 0.98, 1e-15);
  EXPECT_DOUBLE_EQ(comparison_functions({0.0, 0.0, 0.0, 0.5}, c, k).eta, 0.25);
}

TEST(ObserverLyapunov, Values) {
  EXPECT_EQ(observer_lyapunov(0.0, 0.0), 0.0);
  EXPECT_EQ(observer_lyapunov(1.0, 1.0), 1.0);
}

TEST(Monitor, OriginRun) {
  ScenarioConfig cfg = preset_free_decay();
  cfg.y0 = InitialState{0, 0, 0, 0, 0, 0};
  cfg.solver.t_end = 2.0;
  const ScenarioResult res = run_scenario(cfg);
  ASSERT_TRUE(res.report);
  EXPECT_TRUE(res.report->violations.empty());
  for (const auto& s : res.report->samples) {
    EXPECT_EQ(s.V, 0.0);
    EXPECT_EQ(s.W, 0.0);
  }
}

TEST(Monitor, FreeDecayIsDissipative) {
  const ScenarioResult res = run_scenario(preset_free_decay());
  ASSERT_TRUE(res.report);
  EXPECT_TRUE(res.report->violations.empty());
  for (const auto& s : res.report->samples) EXPECT_GE(s.W, 0.0);
  EXPECT_LT(res.report->samples.back().V, res.report->samples.front().V);
}

TEST(Monitor, FlagsInjectedNegativeValue) {
  const ScenarioConfig cfg = preset_free_decay();
  const ScenarioResult res = run_scenario(cfg);
  ASSERT_TRUE(res.report);
  auto samples = res.report->samples;
  samples[100].W = -1e-6;
  const auto v = find_violations(samples, res.trajectory);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].condition, "W_negative");
  EXPECT_DOUBLE_EQ(v[0].t, samples[100].t);
}

TEST(Monitor, ObserverRunTracksComposite) {
  ScenarioConfig cfg = preset_mu_sweep();
  cfg.solver.t_end = 5.0;
  const ScenarioResult res = run_scenario(cfg);
  ASSERT_TRUE(res.report);
  const auto& s0 = res.report->samples.front();
  ASSERT_TRUE(s0.W_z && s0.W_rho);
  EXPECT_DOUBLE_EQ(*s0.W_z, 0.04);
  EXPECT_DOUBLE_EQ(*s0.W_rho, s0.V + cfg.ctrl.rho_composite * *s0.W_z);
  // V alone is not monotone along this run, so increases are data.
  for (const Violation& v : res.report->violations) {
    EXPECT_EQ(v.condition, "W_rho_increase");
    EXPECT_GT(v.margin, 0.0);
  }
}

TEST(Monitor, NeedsThreeRecords) {
  Trajectory tr;
  EXPECT_THROW(monitor(tr, {}, derive_constants({}, {})), ParameterError);
}
