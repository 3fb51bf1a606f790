#pragma once

#include <stdexcept>
#include <string>

#include "cascade/experiments.hpp"
#include "cascade/metrics.hpp"
#include "cascade/model.hpp"

// CSV and summary artifacts. Numeric fields carry 17 significant digits so
// re-ingesting a file reproduces every double bit-exactly. All writes are
// atomic: content goes to a temp file in the target directory which is then
// renamed, so a failed run never leaves a partial artifact behind.

namespace cascade {

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "%.17g" rendering used for every numeric CSV/summary field.
std::string format_full(double value);

std::string trace_csv(const Trajectory& traj);
std::string sweep_csv(const SweepResult& result);
std::string run_summary(const Trajectory& traj, const EfficiencyReport& report);
std::string sweep_summary(const SweepResult& result);

// Writes content atomically; creates the parent directory if needed.
void atomic_write_file(const std::string& path, const std::string& content);

// Parses a trace.csv produced by trace_csv back into (t, occupations) rows;
// used by round-trip checks.
struct TraceRow {
    double t;
    double n1, nb, n2;
};
std::vector<TraceRow> read_trace_csv(const std::string& content);

}  // namespace cascade
