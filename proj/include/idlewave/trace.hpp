#ifndef IDLEWAVE_TRACE_HPP
#define IDLEWAVE_TRACE_HPP

#include <string>
#include <vector>

namespace idlewave {

enum class PhaseKind { Exec, InjectedDelay, NoiseDelay, Comm, Idle };

const char* to_string(PhaseKind k);

struct PhaseRecord {
  int rank = 0;
  int step = 0;  // 1-based
  PhaseKind kind = PhaseKind::Exec;
  double t_start_us = 0.0;
  double t_end_us = 0.0;

  bool operator==(const PhaseRecord&) const = default;
};

/// Per-rank timelines of one simulation run. Records of one rank are
/// non-overlapping, sorted by start time, and tile each step from its ready
/// time to its waitall completion.
struct Trace {
  std::string scenario_digest;
  std::vector<PhaseRecord> records;
  std::vector<double> final_time_us;  // per-rank wall-clock completion

  bool operator==(const Trace&) const = default;
};

/// End of the last record of (rank, step), i.e., the waitall completion.
/// Indexed [rank][step-1]. Reconstructed from the records.
std::vector<std::vector<double>> waitall_times(const Trace& trace, int n_ranks, int n_steps);

}  // namespace idlewave

#endif
