#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "pendsim/closed_loop.hpp"
#include "pendsim/errors.hpp"
#include "pendsim/experiments.hpp"
#include "pendsim/solver.hpp"

using namespace pendsim;

namespace {

// y0' = -y0, y1' = -a y1: no relay.
class Decay final : public SwitchedSystem {
 public:
  std::size_t dimension() const override { return 2; }
  void rhs(double, std::span<const double> y, double,
           std::span<double> d) const override {
    d[0] = -y[0];
    d[1] = -0.5 * y[1];
  }
  double relay_amplitude() const override { return 0.0; }
  bool relay_active() const override { return false; }
  double disturbance(double) const override { return 0.0; }
  Observation observe(double, std::span<const double> y) const override {
    Observation o;
    o.x = {y[0], y[1], 0.0, 0.0};
    return o;
  }
};

ReducedSystem relay_system(double A, double B, Disturbance D) {
  ControllerParams c;
  c.A_gain = A;
  c.B_gain = B;
  return ReducedSystem(make_reduced_model({}, c, ConstsOverride{}), D);
}

}  // namespace

TEST(SolverOptions, Validation) {
  SolverOptions o;
  EXPECT_NO_THROW(o.validate());
  o.rtol = 0.0;
  EXPECT_THROW(o.validate(), ParameterError);
  o = {};
  o.event_tol = 1e-6;  // above sliding_band
  EXPECT_THROW(o.validate(), ParameterError);
  o = {};
  o.record_dt = 40.0;
  EXPECT_THROW(o.validate(), ParameterError);
}

TEST(Integrate, Exponential) {
  SolverOptions o;
  o.t_end = 2.0;
  o.record_dt = 0.5;
  const std::vector<double> y0{1.0, 1.0};
  const Trajectory tr = integrate(Decay{}, y0, o);
  ASSERT_TRUE(tr.completed());
  ASSERT_EQ(tr.records.size(), 5u);
  EXPECT_EQ(tr.records.back().t, 2.0);
  EXPECT_NEAR(tr.records.back().state[1], std::exp(-1.0), 1e-8 * std::exp(-1.0));
  EXPECT_NEAR(tr.records.back().state[0], std::exp(-2.0), 1e-7 * std::exp(-2.0));
  EXPECT_TRUE(tr.events.empty());
  EXPECT_EQ(tr.records.front().mode.label(), "off");
}

TEST(Integrate, RejectsWrongDimension) {
  const std::vector<double> y0{1.0};
  EXPECT_THROW(integrate(Decay{}, y0, {}), ParameterError);
}

TEST(Integrate, UncontrolledRunHasNoEvents) {
  const Trajectory tr = run_scenario(preset_free_decay()).trajectory;
  ASSERT_TRUE(tr.completed());
  EXPECT_TRUE(tr.events.empty());
  EXPECT_TRUE(tr.sliding_intervals().empty());
}

TEST(Integrate, RelayRunSlidesOnSurface) {
  const Trajectory tr = run_scenario(preset_relay()).trajectory;
  ASSERT_TRUE(tr.completed());
  bool entered = false;
  for (const Event& e : tr.events) entered = entered || e.kind == Event::Kind::kSlidingEnter;
  EXPECT_TRUE(entered);
  const auto intervals = tr.sliding_intervals();
  ASSERT_FALSE(intervals.empty());
  for (const Record& r : tr.records) {
    if (r.mode.is_sliding()) {
      EXPECT_LE(std::abs(r.state[1]), 1e-10);
    }
  }
}

TEST(Integrate, DivergenceIsReported) {
  // A repelling angle term sends Omega off in finite time.
  ScenarioConfig cfg = preset_free_decay();
  cfg.consts_override = ConstsOverride{1.0, -1.0, 1.0};
  cfg.solver.t_end = 30.0;
  const Trajectory tr = run_scenario(cfg).trajectory;
  EXPECT_FALSE(tr.completed());
  EXPECT_FALSE(tr.message.empty());
}

TEST(SlidingManager, SlidesWithoutDisturbance) {
  const ReducedSystem sys = relay_system(0.03, 0.0, Disturbance::zero());
  const std::vector<double> y{0.2, 0.0, 0.1, 0.0};
  const SlidingDecision d = sliding_manager(sys, 0.0, y, +1);
  EXPECT_TRUE(d.mode.is_sliding());
  EXPECT_EQ(d.delta_u, 0.0);
}

TEST(SlidingManager, AdmissibilityFollowsDisturbance) {
  const ReducedSystem sys = relay_system(0.05, 1.0, Disturbance::sinusoid(1.0, 1.0, 0.0));
  const std::vector<double> y{0.2, 0.0, 0.1, 0.0};
  const double t_small = std::asin(0.03);  // |sin t| <= 0.05
  const double t_large = std::asin(0.5);
  const SlidingDecision a = sliding_manager(sys, t_small, y, +1);
  EXPECT_TRUE(a.mode.is_sliding());
  EXPECT_NEAR(a.delta_u, -0.03 / 0.05, 1e-12);
  EXPECT_FALSE(sliding_manager(sys, t_large, y, +1).mode.is_sliding());
}

TEST(SlidingManager, NoAuthorityNoSliding) {
  const ReducedSystem sys = relay_system(0.0, 0.0, Disturbance::zero());
  EXPECT_FALSE(sys.relay_active());
  ScenarioConfig cfg = preset_relay();
  cfg.ctrl.A_gain = 0.0;
  EXPECT_TRUE(run_scenario(cfg).trajectory.events.empty());
}

TEST(DenseEval, RecordTimesAreExact) {
  const Trajectory tr = run_scenario(preset_relay()).trajectory;
  for (std::size_t i : {0u, 17u, 800u, 3000u}) {
    EXPECT_EQ(dense_eval(tr, tr.records[i].t), tr.records[i].state);
  }
  EXPECT_THROW(dense_eval(tr, -1.0), std::out_of_range);
  EXPECT_THROW(dense_eval(tr, 31.0), std::out_of_range);
}

TEST(DenseEval, MidpointMatchesReintegration) {
  ScenarioConfig cfg = preset_free_decay();
  const Trajectory tr = run_scenario(cfg).trajectory;
  const double t_mid = 3.005;
  const auto mid = dense_eval(tr, t_mid);
  ScenarioConfig half = cfg;
  half.solver.t_end = t_mid;
  half.solver.record_dt = t_mid;
  const Trajectory re = run_scenario(half).trajectory;
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_NEAR(mid[k], re.records.back().state[k], 10 * cfg.solver.rtol * (1 + std::abs(mid[k])));
  }
}

TEST(DenseEval, OnSurfaceAfterEntry) {
  const Trajectory tr = run_scenario(preset_relay()).trajectory;
  for (const Event& e : tr.events) {
    if (e.kind != Event::Kind::kSlidingEnter) continue;
    const auto y = dense_eval(tr, e.t + 1e-6);
    EXPECT_LE(std::abs(y[1]), 1e-10);
  }
}

TEST(Integrate, Deterministic) {
  const Trajectory a = run_scenario(preset_sinusoid_relay()).trajectory;
  const Trajectory b = run_scenario(preset_sinusoid_relay()).trajectory;
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].state, b.records[i].state);
  }
}
