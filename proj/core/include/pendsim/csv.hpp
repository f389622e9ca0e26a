#pragma once

#include <filesystem>
#include <ostream>

#include "pendsim/lyapunov.hpp"
#include "pendsim/solver.hpp"

namespace pendsim {

/// Column order of trajectory CSV files.
inline constexpr const char* kTrajectoryCsvHeader =
    "t,s,gamma,omega,omega_dot,beta,r,u_bar,delta_u,D,mode,V,W,W_rho";

inline constexpr const char* kReportCsvHeader =
    "t,V,W,psi_cmp,eta,W_z,W_rho,dVdt,dWrho_dt";

/// One row per record; V/W/W_rho come from `report` (left empty when the
/// report does not cover the records). Inapplicable fields are empty.
void write_csv(std::ostream& out, const Trajectory& traj,
               const LyapunovReport& report);

/// Writes via a temporary file and renames; nothing is left behind on error.
void write_csv(const Trajectory& traj, const LyapunovReport& report,
               const std::filesystem::path& path);

void write_report_csv(std::ostream& out, const LyapunovReport& report);
void write_report_csv(const LyapunovReport& report,
                      const std::filesystem::path& path);

}  // namespace pendsim
