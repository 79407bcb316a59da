#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lagbill/integrals.hpp"
#include "lagbill_app/scenario.hpp"

namespace lagbill::app {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kInvalid = 2, kSingular = 3 };

/// Validation beats singularity beats a failed check.
int combine_exit(int a, int b) noexcept;

struct RunResult {
  int exit_code = kPass;
  Termination status = Termination::TimeLimit;
  std::string digest;  // FNV-1a of trajectory.csv and events.csv
  json report;
};

/// Simulates the scenario, runs the requested checks and writes
/// trajectory.csv, events.csv, report.json (plus one CSV per check) to out.
/// An empty out skips writing files.
RunResult run_scenario(const Scenario& sc, const std::filesystem::path& out, std::ostream& log);

struct SweepSpec {
  std::string field;
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
};
/// Parses "field=start:stop:steps".
SweepSpec parse_sweep(const std::string& text);

/// One run per grid value in out/sweep_<k>/, run concurrently; writes
/// out/sweep.csv and returns the combined exit code.
int run_sweep(const json& base, const SweepSpec& sweep, const std::filesystem::path& out, std::ostream& log,
              unsigned threads = 0);

// Export -----------------------------------------------------------------

/// %.17g
std::string format_double(double x);
/// Header t, q1.., v1.., one column per integral, event. No rows for an empty trajectory.
std::string trajectory_csv(const Trajectory& traj, const std::vector<FirstIntegral>& integrals);
std::string events_csv(const Trajectory& traj);
std::string fnv1a_hex(const std::string& data);

}  // namespace lagbill::app
