#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pendsim/model.hpp"
#include "pendsim/transform.hpp"

namespace pendsim {

struct SolverOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = 0.05;
  double event_tol = 1e-10;     ///< |gamma| at a located surface hit
  double sliding_band = 1e-8;   ///< re-arm threshold after a switch
  double t_end = 30.0;
  double record_dt = 0.01;

  /// Throws ParameterError naming the offending field.
  void validate() const;

  bool operator==(const SolverOptions&) const = default;
};

/// Relay regime. A regular mode carries the sign of the applied relay value;
/// relay_sign == 0 means the relay channel is inactive.
struct Mode {
  enum class Kind { kRegular, kSliding };
  Kind kind = Kind::kRegular;
  int relay_sign = 0;

  static Mode regular(int sign) { return {Kind::kRegular, sign}; }
  static Mode sliding() { return {Kind::kSliding, 0}; }
  bool is_sliding() const { return kind == Kind::kSliding; }

  /// "regular+", "regular-", "sliding" or "off".
  std::string label() const;

  bool operator==(const Mode&) const = default;
};

/// Physical quantities derived from a raw state vector at record time.
struct Observation {
  ReducedState x;
  FullState full;
  std::optional<double> u_bar;
  std::optional<std::array<double, 2>> z;
};

/// A closed-loop vector field driven by a relay on gamma = y[1].
class SwitchedSystem {
 public:
  static constexpr std::size_t kSwitchingIndex = 1;

  virtual ~SwitchedSystem() = default;

  virtual std::size_t dimension() const = 0;

  /// Vector field with the relay value resolved to `delta_u`.
  virtual void rhs(double t, std::span<const double> y, double delta_u,
                   std::span<double> dydt) const = 0;

  /// Vector field on the switching surface. Default: rhs at the given
  /// equivalent control with the gamma component zeroed.
  virtual void sliding_rhs(double t, std::span<const double> y,
                           double delta_u_eq, std::span<double> dydt) const;

  /// Relay value making gamma' = 0. Default: solves the affine relation
  /// from two rhs evaluations at +-PiBar.
  virtual double equivalent_control(double t, std::span<const double> y) const;

  virtual double relay_amplitude() const = 0;

  /// False when switching has no effect (zero gain or amplitude); the
  /// solver then runs in mode "off" and logs no events.
  virtual bool relay_active() const = 0;

  virtual double disturbance(double t) const = 0;

  /// Upper bound on the step size at time t.
  virtual double max_step(double /*t*/) const {
    return std::numeric_limits<double>::infinity();
  }

  virtual Observation observe(double t, std::span<const double> y) const = 0;
};

struct Event {
  enum class Kind { kSurfaceHit, kSlidingEnter, kSlidingExit };
  double t = 0.0;
  Kind kind = Kind::kSurfaceHit;
};

const char* to_string(Event::Kind kind);

struct Record {
  double t = 0.0;
  std::vector<double> state;
  Mode mode;
  double delta_u = 0.0;
  double disturbance = 0.0;
  Observation obs;
};

/// One accepted step's continuous extension, valid on [t0, t_valid_end].
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  double t_valid_end = 0.0;
  std::vector<double> coeffs;  // 5 blocks of `dim`
};

struct Trajectory {
  enum class Status { kCompleted, kDiverged, kStepUnderflow, kFailed };

  std::size_t dim = 0;
  std::vector<Record> records;  ///< uniform record_dt grid
  std::vector<Event> events;
  std::vector<DenseSegment> segments;

  Status status = Status::kCompleted;
  std::string message;
  double t_stop = 0.0;
  std::vector<double> state_at_stop;

  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;
  std::size_t rhs_evaluations = 0;

  bool completed() const { return status == Status::kCompleted; }

  /// [enter, exit] pairs; an unterminated interval closes at t_stop.
  std::vector<std::pair<double, double>> sliding_intervals() const;
};

const char* to_string(Trajectory::Status status);

struct SlidingDecision {
  Mode mode;
  double delta_u = 0.0;
};

/// Decides what happens when the state is on gamma = 0: sliding if both
/// one-sided gamma' values point at the surface, otherwise a crossing.
/// One-sided rates within `grazing_tol` of zero count as crossing.
SlidingDecision sliding_manager(const SwitchedSystem& system, double t,
                                std::span<const double> y, int incoming_sign,
                                double grazing_tol = 1e-10);

/// Integrates `system` from t = 0 to opts.t_end.
///
/// Adaptive Dormand-Prince 5(4) with the 4th-order continuous extension.
/// Relay switches are located on the dense output; a step never spans a
/// mode change. Failures (divergence, step underflow, domain errors) are
/// reported through Trajectory::status, not thrown.
Trajectory integrate(const SwitchedSystem& system, std::span<const double> y0,
                     const SolverOptions& opts);

/// State at time t from the stored dense output; returns the record state
/// exactly at record times. Throws std::out_of_range outside the span.
std::vector<double> dense_eval(const Trajectory& traj, double t);

}  // namespace pendsim
