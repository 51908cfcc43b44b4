#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uavtraj/init_baselines.hpp"

namespace uavtraj {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

struct SweepSpec {
    std::vector<double> periods_s;
    double slot_length_s = 0.5;  // target slot length; each period gets N = ceil(T / this)
};

struct CommandOptions {
    BcdConfig bcd;
    double decimate_s = 0;     // > 0: also write trajectory_decimated.csv at this sampling
    unsigned seed = 0;         // reserved for future stochastic features; currently unused
    double slot_length_s = 0;  // > 0: override num_slots with ceil(period / this)
};

/// Runs the full optimizer on one scenario and writes trajectory.csv,
/// schedule.csv, speed.csv and report.csv into out_dir. Prints the final
/// objective (relaxed and binary) and the iteration count to `out`.
/// Returns 0 on convergence, 2 on configuration errors, 3 on solver failure.
int cmd_solve(const std::string& scenario_path, const std::string& out_dir,
              const CommandOptions& opt, std::ostream& out, std::ostream& diag);

/// Runs the proposed, circular and static schemes for every period in the
/// sweep and appends one row per (period, scheme) to sweep.csv. Failing
/// periods are recorded with a status and skipped.
int cmd_sweep(const std::string& scenario_path, const SweepSpec& sweep,
              const std::string& out_dir, const CommandOptions& opt, std::ostream& out,
              std::ostream& diag);

/// Writes only the circular initialization (circle.csv + trajectory.csv).
int cmd_init_only(const std::string& scenario_path, const std::string& out_dir,
                  std::ostream& out, std::ostream& diag);

// CSV codecs for the emitted files. Slots and users are 1-based on disk.
void write_trajectory_csv(const std::string& path, const Trajectory& t);
Trajectory read_trajectory_csv(const std::string& path);
void write_schedule_csv(const std::string& path, const Schedule& a);
Schedule read_schedule_csv(const std::string& path);
void write_speed_csv(const std::string& path, const Scenario& s, const Trajectory& t);

}  // namespace uavtraj
