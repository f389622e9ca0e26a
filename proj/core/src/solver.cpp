#include "pendsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>

#include "pendsim/errors.hpp"

namespace pendsim {

void SolverOptions::validate() const {
  auto positive = [](double v, const char* field) {
    if (!std::isfinite(v) || v <= 0) {
      throw ParameterError(std::string("solver.") + field +
                           ": must be finite and > 0");
    }
  };
  positive(rtol, "rtol");
  positive(atol, "atol");
  positive(max_step, "max_step");
  positive(event_tol, "event_tol");
  positive(sliding_band, "sliding_band");
  positive(t_end, "t_end");
  positive(record_dt, "record_dt");
  if (event_tol >= sliding_band) {
    throw ParameterError("solver.event_tol: must be < solver.sliding_band");
  }
  if (record_dt > t_end) {
    throw ParameterError("solver.record_dt: must be <= solver.t_end");
  }
}

std::string Mode::label() const {
  if (kind == Kind::kSliding) {
    return "sliding";
  }
  if (relay_sign > 0) {
    return "regular+";
  }
  if (relay_sign < 0) {
    return "regular-";
  }
  return "off";
}

const char* to_string(Event::Kind kind) {
  switch (kind) {
    case Event::Kind::kSurfaceHit:
      return "surface_hit";
    case Event::Kind::kSlidingEnter:
      return "sliding_enter";
    case Event::Kind::kSlidingExit:
      return "sliding_exit";
  }
  return "unknown";
}

const char* to_string(Trajectory::Status status) {
  switch (status) {
    case Trajectory::Status::kCompleted:
      return "completed";
    case Trajectory::Status::kDiverged:
      return "diverged";
    case Trajectory::Status::kStepUnderflow:
      return "step_underflow";
    case Trajectory::Status::kFailed:
      return "failed";
  }
  return "unknown";
}

std::vector<std::pair<double, double>> Trajectory::sliding_intervals() const {
  std::vector<std::pair<double, double>> out;
  std::optional<double> open;
  for (const Event& e : events) {
    if (e.kind == Event::Kind::kSlidingEnter) {
      open = e.t;
    } else if (e.kind == Event::Kind::kSlidingExit && open) {
      out.emplace_back(*open, e.t);
      open.reset();
    }
  }
  if (open) {
    out.emplace_back(*open, t_stop);
  }
  return out;
}

void SwitchedSystem::sliding_rhs(double t, std::span<const double> y,
                                 double delta_u_eq,
                                 std::span<double> dydt) const {
  rhs(t, y, delta_u_eq, dydt);
  dydt[kSwitchingIndex] = 0.0;
}

double SwitchedSystem::equivalent_control(double t,
                                          std::span<const double> y) const {
  const double bound = relay_amplitude();
  std::vector<double> d(dimension());
  rhs(t, y, bound, d);
  const double up = d[kSwitchingIndex];
  rhs(t, y, -bound, d);
  const double down = d[kSwitchingIndex];
  if (up == down) {
    return 0.0;
  }
  // gamma'(du) is affine: gamma'(du) = mid + slope du.
  return -bound * (up + down) / (up - down);
}

SlidingDecision sliding_manager(const SwitchedSystem& system, double t,
                                std::span<const double> y, int incoming_sign,
                                double grazing_tol) {
  const double bound = system.relay_amplitude();
  std::vector<double> on_surface(y.begin(), y.end());
  on_surface[SwitchedSystem::kSwitchingIndex] = 0.0;
  std::vector<double> d(system.dimension());
  system.rhs(t, on_surface, bound, d);
  const double up = d[SwitchedSystem::kSwitchingIndex];
  system.rhs(t, on_surface, -bound, d);
  const double down = d[SwitchedSystem::kSwitchingIndex];

  if (up < -grazing_tol && down > grazing_tol) {
    return {Mode::sliding(), system.equivalent_control(t, on_surface)};
  }
  int sign = 0;
  if (up > grazing_tol && down > grazing_tol) {
    sign = 1;
  } else if (up < -grazing_tol && down < -grazing_tol) {
    sign = -1;
  } else if (incoming_sign != 0) {
    sign = -incoming_sign;
  } else {
    sign = (up + down) >= 0 ? 1 : -1;
  }
  return {Mode::regular(sign), sign * bound};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                 a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner).
constexpr double dd1 = -12715105075.0 / 11282082432.0,
                 dd3 = 87487479700.0 / 32700410799.0,
                 dd4 = -10690763975.0 / 1880347072.0,
                 dd5 = 701980252875.0 / 199316789632.0,
                 dd6 = -1453857185.0 / 822651844.0,
                 dd7 = 69997945.0 / 29380423.0;

constexpr double kDivergenceBound = 1e8;
constexpr int kEventSamples = 4;
constexpr int kMaxStalledEvents = 16;

void dense_at(const DenseSegment& seg, std::size_t dim, double t,
              std::span<double> out) {
  const double theta = (t - seg.t0) / seg.h;
  const double theta1 = 1.0 - theta;
  const double* c = seg.coeffs.data();
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = c[i] + theta * (c[dim + i] +
                             theta1 * (c[2 * dim + i] +
                                       theta * (c[3 * dim + i] +
                                                theta1 * c[4 * dim + i])));
  }
}

// Root of f on [ta, tb] with f(ta) >= 0 > f(tb): secant steps, falling back
// to bisection when the secant stalls (Illinois weighting). Stops once
// |f| <= ftol or the bracket is at rounding level. Returns the end with
// f <= 0 when `prefer_negative`.
template <typename F>
double locate_root(F&& f, double ta, double fa, double tb, double fb,
                   double ftol, bool prefer_negative) {
  int side = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const double width = tb - ta;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::abs(tb))) {
      break;
    }
    double tm = tb - fb * (tb - ta) / (fb - fa);
    if (!(tm > ta && tm < tb) || iter % 4 == 3) {
      tm = 0.5 * (ta + tb);
    }
    const double fm = f(tm);
    if (std::abs(fm) <= ftol && !(prefer_negative && fm > 0)) {
      return tm;
    }
    if (fm >= 0) {
      ta = tm;
      fa = fm;
      if (side == -1) {
        fb *= 0.5;
      }
      side = -1;
    } else {
      tb = tm;
      fb = fm;
      if (side == 1) {
        fa *= 0.5;
      }
      side = 1;
    }
    if (!prefer_negative && std::abs(fm) <= ftol) {
      return tm;
    }
  }
  if (prefer_negative) {
    return tb;
  }
  return std::abs(fa) <= std::abs(fb) ? ta : tb;
}

class Integrator {
 public:
  Integrator(const SwitchedSystem& system, const SolverOptions& opts)
      : sys_(system), opts_(opts), dim_(system.dimension()) {
    for (auto& k : k_) {
      k.assign(dim_, 0.0);
    }
    ytmp_.assign(dim_, 0.0);
    ynew_.assign(dim_, 0.0);
    probe_.assign(dim_, 0.0);
  }

  Trajectory run(std::span<const double> y0);

 private:
  void eval(double t, std::span<const double> y, std::span<double> out) {
    ++traj_.rhs_evaluations;
    if (mode_.is_sliding()) {
      sys_.sliding_rhs(t, y, sys_.equivalent_control(t, y), out);
    } else {
      sys_.rhs(t, y, mode_.relay_sign * sys_.relay_amplitude(), out);
    }
  }

  double relay_value(double t, std::span<const double> y) const {
    if (mode_.is_sliding()) {
      return sys_.equivalent_control(t, y);
    }
    return mode_.relay_sign * sys_.relay_amplitude();
  }

  double error_norm(std::span<const double> y, std::span<const double> ynew,
                    std::span<const double> err) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double sc =
          opts_.atol + opts_.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = err[i] / sc;
      sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(dim_));
  }

  double initial_step(double t, std::span<const double> y, double hmax);
  void push_record(double t, std::span<const double> y);
  void emit_records(const DenseSegment& seg, double seg_end, bool end_exact,
                    std::span<const double> y_end);
  void log(double t, Event::Kind kind) { traj_.events.push_back({t, kind}); }
  void enter_from_surface(double t, std::vector<double>& y, int incoming);

  const SwitchedSystem& sys_;
  SolverOptions opts_;
  std::size_t dim_;
  std::array<std::vector<double>, 7> k_;
  std::vector<double> ytmp_, ynew_, probe_;
  Trajectory traj_;
  Mode mode_;
  bool armed_ = true;
  std::size_t next_record_ = 0;
  std::size_t n_records_ = 0;
};

double Integrator::initial_step(double t, std::span<const double> y,
                                double hmax) {
  eval(t, y, k_[0]);
  double d0 = 0.0, d1 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = opts_.atol + opts_.rtol * std::abs(y[i]);
    d0 += (y[i] / sc) * (y[i] / sc);
    d1 += (k_[0][i] / sc) * (k_[0][i] / sc);
  }
  d0 = std::sqrt(d0 / dim_);
  d1 = std::sqrt(d1 / dim_);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, hmax);
  for (std::size_t i = 0; i < dim_; ++i) {
    ytmp_[i] = y[i] + h0 * k_[0][i];
  }
  eval(t + h0, ytmp_, k_[1]);
  double d2 = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double sc = opts_.atol + opts_.rtol * std::abs(y[i]);
    const double e = (k_[1][i] - k_[0][i]) / sc;
    d2 += e * e;
  }
  d2 = std::sqrt(d2 / dim_) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                  : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, hmax});
}

void Integrator::push_record(double t, std::span<const double> y) {
  Record rec;
  rec.t = t;
  rec.state.assign(y.begin(), y.end());
  rec.mode = mode_;
  rec.delta_u = sys_.relay_active() ? relay_value(t, y) : 0.0;
  rec.disturbance = sys_.disturbance(t);
  rec.obs = sys_.observe(t, y);
  traj_.records.push_back(std::move(rec));
}

void Integrator::emit_records(const DenseSegment& seg, double seg_end,
                              bool end_exact, std::span<const double> y_end) {
  while (next_record_ <= n_records_) {
    const double tr = next_record_ == n_records_
                          ? opts_.t_end
                          : static_cast<double>(next_record_) * opts_.record_dt;
    if (tr > seg_end) {
      break;
    }
    if (end_exact && tr == seg_end) {
      push_record(tr, y_end);
    } else {
      dense_at(seg, dim_, tr, probe_);
      push_record(tr, probe_);
    }
    ++next_record_;
  }
}

void Integrator::enter_from_surface(double t, std::vector<double>& y,
                                    int incoming) {
  y[SwitchedSystem::kSwitchingIndex] = 0.0;
  const SlidingDecision d = sliding_manager(sys_, t, y, incoming);
  mode_ = d.mode;
  if (mode_.is_sliding()) {
    log(t, Event::Kind::kSlidingEnter);
  }
  armed_ = false;
}

Trajectory Integrator::run(std::span<const double> y0) {
  traj_ = Trajectory{};
  traj_.dim = dim_;
  std::vector<double> y(y0.begin(), y0.end());
  double t = 0.0;
  n_records_ = static_cast<std::size_t>(std::llround(opts_.t_end / opts_.record_dt));
  next_record_ = 0;

  auto stop = [&](Trajectory::Status status, std::string msg, double ts,
                  std::span<const double> ys) {
    traj_.status = status;
    traj_.message = std::move(msg);
    traj_.t_stop = ts;
    traj_.state_at_stop.assign(ys.begin(), ys.end());
  };

  try {
    for (double v : y) {
      if (!std::isfinite(v)) {
        throw DomainError("initial state is not finite");
      }
    }
    const double bound = sys_.relay_amplitude();
    const std::size_t gi = SwitchedSystem::kSwitchingIndex;
    if (!sys_.relay_active()) {
      mode_ = Mode::regular(0);
    } else if (std::abs(y[gi]) <= opts_.event_tol) {
      log(t, Event::Kind::kSurfaceHit);
      enter_from_surface(t, y, 0);
    } else {
      mode_ = Mode::regular(y[gi] > 0 ? 1 : -1);
      armed_ = std::abs(y[gi]) >= opts_.sliding_band;
    }
    push_record(t, y);
    next_record_ = 1;

    double h = initial_step(t, y, std::min(opts_.max_step, sys_.max_step(t)));
    bool fsal = false;
    int stalled_events = 0;
    while (t < opts_.t_end) {
      const double hmax = std::min(opts_.max_step, sys_.max_step(t));
      h = std::min(h, hmax);
      bool last = false;
      if (t + h >= opts_.t_end - 1e-12 * std::max(1.0, opts_.t_end)) {
        h = opts_.t_end - t;
        last = true;
      }
      if (!fsal) {
        eval(t, y, k_[0]);
      }
      auto stage = [&](std::initializer_list<std::pair<int, double>> terms) {
        for (std::size_t i = 0; i < dim_; ++i) {
          double acc = 0.0;
          for (const auto& [j, a] : terms) {
            acc += a * k_[j][i];
          }
          ytmp_[i] = y[i] + h * acc;
        }
      };
      stage({{0, a21}});
      eval(t + c2 * h, ytmp_, k_[1]);
      stage({{0, a31}, {1, a32}});
      eval(t + c3 * h, ytmp_, k_[2]);
      stage({{0, a41}, {1, a42}, {2, a43}});
      eval(t + c4 * h, ytmp_, k_[3]);
      stage({{0, a51}, {1, a52}, {2, a53}, {3, a54}});
      eval(t + c5 * h, ytmp_, k_[4]);
      stage({{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
      eval(t + h, ytmp_, k_[5]);
      for (std::size_t i = 0; i < dim_; ++i) {
        ynew_[i] = y[i] + h * (a71 * k_[0][i] + a73 * k_[2][i] +
                               a74 * k_[3][i] + a75 * k_[4][i] +
                               a76 * k_[5][i]);
      }
      const double t_new = last ? opts_.t_end : t + h;
      eval(t_new, ynew_, k_[6]);
      for (std::size_t i = 0; i < dim_; ++i) {
        ytmp_[i] = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] +
                        e5 * k_[4][i] + e6 * k_[5][i] + e7 * k_[6][i]);
      }
      const double err = error_norm(y, ynew_, ytmp_);
      if (!std::isfinite(err) || err > 1.0) {
        ++traj_.steps_rejected;
        const double fac =
            std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
        h *= fac;
        fsal = true;  // k_[0] still belongs to (t, y)
        if (h < 16.0 * std::numeric_limits<double>::epsilon() *
                    std::max(1.0, std::abs(t))) {
          stop(Trajectory::Status::kStepUnderflow,
               "step size underflow at t = " + std::to_string(t), t, y);
          return std::move(traj_);
        }
        continue;
      }
      ++traj_.steps_accepted;

      double ymax = 0.0;
      bool finite = true;
      for (double v : ynew_) {
        finite = finite && std::isfinite(v);
        ymax = std::max(ymax, std::abs(v));
      }
      if (!finite || ymax > kDivergenceBound) {
        stop(Trajectory::Status::kDiverged,
             "state escaped |y| > 1e8 at t = " + std::to_string(t_new), t_new,
             ynew_);
        return std::move(traj_);
      }

      DenseSegment seg;
      seg.t0 = t;
      seg.h = h;
      seg.t_valid_end = t_new;
      seg.coeffs.resize(5 * dim_);
      for (std::size_t i = 0; i < dim_; ++i) {
        const double ydiff = ynew_[i] - y[i];
        const double bspl = h * k_[0][i] - ydiff;
        seg.coeffs[i] = y[i];
        seg.coeffs[dim_ + i] = ydiff;
        seg.coeffs[2 * dim_ + i] = bspl;
        seg.coeffs[3 * dim_ + i] = ydiff - h * k_[6][i] - bspl;
        seg.coeffs[4 * dim_ + i] =
            h * (dd1 * k_[0][i] + dd3 * k_[2][i] + dd4 * k_[3][i] +
                 dd5 * k_[4][i] + dd6 * k_[5][i] + dd7 * k_[6][i]);
      }

      // Event search on the continuous extension.
      std::optional<double> t_event;
      if (sys_.relay_active()) {
        auto at = [&](double tt) -> std::span<const double> {
          if (tt == t_new) {
            return ynew_;
          }
          dense_at(seg, dim_, tt, probe_);
          return probe_;
        };
        std::function<double(double)> g;
        double threshold = 0.0;
        double ftol = 0.0;
        bool prefer_negative = false;
        if (mode_.is_sliding()) {
          g = [&](double tt) {
            return bound - std::abs(sys_.equivalent_control(tt, at(tt)));
          };
          ftol = 1e-12 * std::max(1.0, bound);
          prefer_negative = true;
        } else {
          const int sigma = mode_.relay_sign;
          g = [&, sigma](double tt) { return sigma * at(tt)[gi]; };
          threshold = armed_ ? 0.0 : -opts_.sliding_band;
          ftol = opts_.event_tol;
        }
        double ta = t;
        double fa = g(t);
        for (int j = 1; j <= kEventSamples; ++j) {
          const double tb = j == kEventSamples ? t_new : t + h * j / kEventSamples;
          const double fb = g(tb);
          if (fb < threshold) {
            if (fa < 0) {
              t_event = ta;
            } else {
              t_event = locate_root(g, ta, fa, tb, fb, ftol, prefer_negative);
            }
            break;
          }
          ta = tb;
          fa = fb;
        }
      }

      if (t_event) {
        if (*t_event <= t) {
          if (++stalled_events > kMaxStalledEvents) {
            stop(Trajectory::Status::kFailed,
                 "relay chattering without progress at t = " + std::to_string(t),
                 t, y);
            return std::move(traj_);
          }
        } else {
          stalled_events = 0;
        }
        seg.t_valid_end = *t_event;
        std::vector<double> y_event(dim_);
        if (*t_event == t_new) {
          y_event = ynew_;
        } else {
          dense_at(seg, dim_, *t_event, y_event);
        }
        emit_records(seg, *t_event, false, y_event);
        traj_.segments.push_back(std::move(seg));
        t = *t_event;
        if (mode_.is_sliding()) {
          const double ueq = sys_.equivalent_control(t, y_event);
          mode_ = Mode::regular(ueq >= 0 ? 1 : -1);
          y_event[gi] = 0.0;
          armed_ = false;
          log(t, Event::Kind::kSlidingExit);
        } else {
          log(t, Event::Kind::kSurfaceHit);
          enter_from_surface(t, y_event, mode_.relay_sign);
        }
        y = std::move(y_event);
        fsal = false;
      } else {
        emit_records(seg, t_new, true, ynew_);
        traj_.segments.push_back(std::move(seg));
        t = t_new;
        y = ynew_;
        std::swap(k_[0], k_[6]);
        fsal = true;
        if (!armed_ && !mode_.is_sliding() &&
            mode_.relay_sign * y[gi] >= opts_.sliding_band) {
          armed_ = true;
        }
      }
      const double fac = err == 0.0 ? 5.0
                                    : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= fac;
    }
    stop(Trajectory::Status::kCompleted, "", t, y);
  } catch (const std::exception& ex) {
    stop(Trajectory::Status::kFailed, ex.what(), t, y);
  }
  return std::move(traj_);
}

}  // namespace

Trajectory integrate(const SwitchedSystem& system, std::span<const double> y0,
                     const SolverOptions& opts) {
  opts.validate();
  if (y0.size() != system.dimension()) {
    throw ParameterError("integrate: initial state has wrong dimension");
  }
  Integrator integrator(system, opts);
  return integrator.run(y0);
}

std::vector<double> dense_eval(const Trajectory& traj, double t) {
  if (traj.records.empty() || !(t >= traj.records.front().t) ||
      !(t <= traj.records.back().t)) {
    throw std::out_of_range("dense_eval: t outside trajectory span");
  }
  const auto rec = std::lower_bound(
      traj.records.begin(), traj.records.end(), t,
      [](const Record& r, double v) { return r.t < v; });
  if (rec != traj.records.end() && rec->t == t) {
    return rec->state;
  }
  // First segment whose validity ends at or after t.
  const auto seg = std::lower_bound(
      traj.segments.begin(), traj.segments.end(), t,
      [](const DenseSegment& s, double v) { return s.t_valid_end < v; });
  if (seg == traj.segments.end()) {
    throw std::out_of_range("dense_eval: no segment covers t");
  }
  std::vector<double> out(traj.dim);
  dense_at(*seg, traj.dim, t, out);
  return out;
}

}  // namespace pendsim
