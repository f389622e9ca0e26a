// pendsim command-line front end.
//
// Exit codes: 0 success, 1 invalid input, 2 a verification check failed.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pendsim/config.hpp"
#include "pendsim/csv.hpp"
#include "pendsim/errors.hpp"
#include "pendsim/experiments.hpp"
#include "pendsim/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kCheckFailed = 2;

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw pendsim::ConfigError({"mu: cannot parse '" + item + "' as a number"});
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw pendsim::ConfigError({"mu: empty list"});
  }
  return out;
}

void print_summary(const pendsim::ExperimentSummary& s) {
  std::printf("status: %s\n", pendsim::to_string(s.status));
  if (!s.message.empty()) std::printf("message: %s\n", s.message.c_str());
  if (s.settling_time) {
    std::printf("settling_time: %.6g\n", *s.settling_time);
  } else {
    std::printf("settling_time: not settled\n");
  }
  std::printf("steady_amplitude: s=%.6g gamma=%.6g Omega=%.6g OmegaDot=%.6g (max %.6g)\n",
              s.steady_amplitude[0], s.steady_amplitude[1], s.steady_amplitude[2],
              s.steady_amplitude[3], s.max_steady_amplitude);
  std::printf("sliding_intervals: %zu\n", s.sliding_intervals.size());
  for (const auto& [a, b] : s.sliding_intervals) {
    std::printf("  [%.6g, %.6g]\n", a, b);
  }
  std::printf("lyapunov_violations: %zu\n", s.lyapunov_violations);
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
  const pendsim::ScenarioConfig cfg = pendsim::load_config(config_path);
  const pendsim::ScenarioResult res = pendsim::run_scenario(cfg);
  const pendsim::LyapunovReport empty;
  const auto& report = res.report ? *res.report : empty;
  pendsim::write_csv(res.trajectory, report, out_path);
  if (!cfg.outputs.report.empty()) {
    std::filesystem::path rp = cfg.outputs.report;
    if (rp.is_relative()) rp = std::filesystem::path(out_path).parent_path() / rp;
    pendsim::write_report_csv(report, rp);
  }
  print_summary(res.summary);
  return kOk;
}

int cmd_verify(const std::string& suite) {
  bool ok = true;
  for (const auto& c : pendsim::verify_suite(suite)) {
    std::printf("%s %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    ok = ok && c.passed;
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_sweep(const std::string& config_path, const std::string& mu_list) {
  const auto cfg = pendsim::load_config(config_path);
  const auto rows = pendsim::sweep_mu(cfg, parse_list(mu_list));
  std::printf("mu,deviation,deviation_over_mu,completed\n");
  for (const auto& r : rows) {
    std::printf("%.6g,%.6g,%.6g,%d\n", r.mu, r.deviation, r.deviation / r.mu,
                r.completed ? 1 : 0);
  }
  return kOk;
}

int cmd_basin(const std::string& config_path, const std::string& grid, double eps,
              double t_end) {
  const auto cfg = pendsim::load_config(config_path);
  const auto res = pendsim::basin_probe(cfg, pendsim::parse_grid(grid), eps,
                                        t_end > 0.0 ? t_end : cfg.solver.t_end);
  std::printf("s,gamma,Omega,OmegaDot,z1,z2,level,converged,final_norm\n");
  for (const auto& c : res.cells) {
    std::printf("%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%d,%.6g\n", c.ic.s, c.ic.gamma,
                c.ic.Omega, c.ic.OmegaDot, c.ic.z1, c.ic.z2, c.level,
                c.converged ? 1 : 0, c.final_norm);
  }
  std::printf("# basin_radius %.6g%s\n", res.radius,
              res.all_converged ? " (all converged)" : "");
  return kOk;
}

int cmd_compare(const std::string& config_path) {
  const auto cfg = pendsim::load_config(config_path);
  const auto rep = pendsim::compare_models(cfg);
  std::printf("full_status: %s\n", pendsim::to_string(rep.full_status));
  std::printf("reduced_status: %s\n", pendsim::to_string(rep.reduced_status));
  if (!rep.message.empty()) std::printf("message: %s\n", rep.message.c_str());
  std::printf("deviation: %.6g\n", rep.deviation);
  std::printf("gamma_residual: %.6g\n", rep.gamma_residual);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cart-pendulum stabilization simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, suite = "all", mu_list, grid;
  double eps = 1e-2;
  double basin_t_end = 0.0;

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its CSV");
  simulate->add_option("--config", config_path, "Scenario file")->required();
  simulate->add_option("--out", out_path, "Trajectory CSV path")->required();

  auto* verify = app.add_subcommand("verify", "Run built-in self checks");
  verify->add_option("--suite", suite, "Check group")
      ->check(CLI::IsMember({"transforms", "lyapunov", "consistency", "all"}));

  auto* sweep = app.add_subcommand("sweep-mu", "Observer deviation for several mu");
  sweep->add_option("--config", config_path, "Scenario file")->required();
  sweep->add_option("--mu", mu_list, "Comma-separated mu values")->required();

  auto* basin = app.add_subcommand("basin", "Classify a grid of initial conditions");
  basin->add_option("--config", config_path, "Scenario file")->required();
  basin->add_option("--grid", grid, "Two axes, e.g. gamma=-3:3:9,z=-2:2:9")->required();
  basin->add_option("--eps", eps, "Convergence threshold on ||x(t_end)||");
  basin->add_option("--t-end", basin_t_end, "Horizon per run (default: config)");

  auto* compare = app.add_subcommand("compare", "Full plant versus reduced model");
  compare->add_option("--config", config_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*simulate) return cmd_simulate(config_path, out_path);
    if (*verify) return cmd_verify(suite);
    if (*sweep) return cmd_sweep(config_path, mu_list);
    if (*basin) return cmd_basin(config_path, grid, eps, basin_t_end);
    if (*compare) return cmd_compare(config_path);
  } catch (const pendsim::ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: " << issue << '\n';
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
