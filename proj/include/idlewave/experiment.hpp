#ifndef IDLEWAVE_EXPERIMENT_HPP
#define IDLEWAVE_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "idlewave/config.hpp"
#include "idlewave/trace.hpp"
#include "json.hpp"

namespace idlewave {

struct ExperimentResult {
  Trace trace;
  nlohmann::ordered_json summary;
};

/// Simulate the configured scenario and attach the analysis summary. The
/// summary embeds the full effective config and seed, enough to reproduce
/// the trace bit-exactly. For runs with a single injection it reports front
/// arrivals, the fitted propagation speed (with the analytic value for
/// comparison) and the decay estimate; for multiple injections it reports
/// the cancellation analysis; for any injected delay it reports the excess
/// runtime against a delay-free twin run with the same seed.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// The analysis part of run_experiment over an externally supplied trace
/// (the `analyze` path for on-disk trace CSVs).
nlohmann::ordered_json analyze_trace(const ExperimentConfig& cfg, const Trace& trace);

struct SweepRow {
  double value = 0.0;
  int n_seeds = 0;
  double beta_median = 0.0, beta_min = 0.0, beta_max = 0.0;
  double v_median = 0.0, v_min = 0.0, v_max = 0.0;
};

/// Run cfg.sweep (required) and aggregate per-value decay/speed statistics.
/// Each value is repeated with seeds base, base+1, ..., base+reps-1.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

std::string sweep_to_csv(const ExperimentConfig& cfg, const std::vector<SweepRow>& rows);

/// Write trace.csv and summary.json under dir (atomically per file).
void write_experiment_artifacts(const std::string& dir, const ExperimentResult& result);

}  // namespace idlewave

#endif
