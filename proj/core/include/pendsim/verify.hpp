#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pendsim {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in self checks. `suite` is transforms, lyapunov, consistency or
/// all; anything else throws ParameterError.
std::vector<CheckResult> verify_suite(std::string_view suite);

/// Individual checks, also used by the acceptance runner.
CheckResult check_beta_round_trip(std::size_t n = 1000, double tol = 1e-12);
CheckResult check_state_round_trip(std::size_t n = 100, double tol = 1e-10);
CheckResult check_angle_lyapunov_grid(std::size_t n = 200);
CheckResult check_observer_decay(double mu = 0.01);
CheckResult check_free_decay_monitor();
CheckResult check_model_consistency();

}  // namespace pendsim
