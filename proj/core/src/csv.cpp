#include "pendsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>

namespace pendsim {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) {
        throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      }
      body(out);
      out.flush();
      if (!out) {
        throw std::runtime_error("write failed for " + tmp.string());
      }
    }
    std::filesystem::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(tmp, ec);
    throw;
  }
}

}  // namespace

void write_csv(std::ostream& out, const Trajectory& traj,
               const LyapunovReport& report) {
  out << kTrajectoryCsvHeader << '\n';
  const bool with_report = report.samples.size() == traj.records.size();
  for (std::size_t i = 0; i < traj.records.size(); ++i) {
    const Record& r = traj.records[i];
    out << num(r.t) << ',' << num(r.obs.x.s) << ',' << num(r.obs.x.gamma) << ','
        << num(r.obs.x.Omega) << ',' << num(r.obs.x.OmegaDot) << ','
        << num(r.obs.full.beta) << ',' << num(r.obs.full.r) << ','
        << opt(r.obs.u_bar) << ',' << num(r.delta_u) << ','
        << num(r.disturbance) << ',' << r.mode.label() << ',';
    if (with_report) {
      const LyapunovSample& s = report.samples[i];
      out << num(s.V) << ',' << num(s.W) << ',' << opt(s.W_rho);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

void write_csv(const Trajectory& traj, const LyapunovReport& report,
               const std::filesystem::path& path) {
  atomic_write(path, [&](std::ostream& out) { write_csv(out, traj, report); });
}

void write_report_csv(std::ostream& out, const LyapunovReport& report) {
  out << kReportCsvHeader << '\n';
  for (const LyapunovSample& s : report.samples) {
    out << num(s.t) << ',' << num(s.V) << ',' << num(s.W) << ','
        << num(s.psi_cmp) << ',' << num(s.eta) << ',' << opt(s.W_z) << ','
        << opt(s.W_rho) << ',' << num(s.dVdt) << ',' << opt(s.dWrho_dt)
        << '\n';
  }
}

void write_report_csv(const LyapunovReport& report,
                      const std::filesystem::path& path) {
  atomic_write(path, [&](std::ostream& out) { write_report_csv(out, report); });
}

}  // namespace pendsim
