#ifndef IDLEWAVE_ANALYSIS_HPP
#define IDLEWAVE_ANALYSIS_HPP

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "idlewave/scenario.hpp"
#include "idlewave/trace.hpp"

namespace idlewave {

/// Idle duration per (rank, step) after subtracting the noise-free
/// communication baseline (the engine already performs the subtraction when
/// it splits a waiting interval into Comm + Idle). Carries enough scenario
/// context to compute hop distances and thresholds downstream.
struct IdleMatrix {
  Eigen::MatrixXd idle_us;        // n_ranks x n_steps
  Eigen::MatrixXd idle_start_us;  // NaN where a cell has no idle record
  double baseline_comm_us = 0.0;
  double t_exec_us = 0.0;
  Topology topology;
  Protocol protocol = Protocol::Eager;

  int n_ranks() const { return static_cast<int>(idle_us.rows()); }
  int n_steps() const { return static_cast<int>(idle_us.cols()); }
};

IdleMatrix idle_matrix(const Trace& trace, const Scenario& scenario);

/// Minimal rank distance from the injection respecting the propagation
/// directions of (direction, protocol) and the boundary. Empty when the wave
/// cannot reach the rank (e.g. upstream of an eager unidirectional chain).
std::optional<int> hop_distance(int rank, int injection_rank, int n_ranks,
                                const Topology& topo, Protocol protocol);

struct FrontArrival {
  double t_us = 0.0;
  int step = 0;
  int hop = 0;
};

struct WaveFronts {
  int injection_rank = 0;
  int injection_step = 1;
  double threshold_theta = 0.05;
  std::vector<std::optional<FrontArrival>> arrivals;  // indexed by rank
};

/// How the arrival threshold is anchored. ExecFraction flags the first idle
/// record of at least theta * t_exec. PeakFraction flags the first record of
/// at least theta * (the rank's largest idle record); it ignores the
/// fine-grained noise floor and is the right choice when hunting a large
/// wave inside a noisy run.
enum class FrontThreshold { ExecFraction, PeakFraction };

WaveFronts detect_fronts(const IdleMatrix& idle, int injection_rank, int injection_step,
                         double theta, FrontThreshold mode = FrontThreshold::ExecFraction);

struct SpeedEstimate {
  double v_ranks_per_s = 0.0;
  double fit_r2 = 0.0;
  int n_points = 0;
};

/// Least-squares fit of front arrival time against hop distance over the
/// leading edge (per-hop earliest arrivals, filtered to the monotone
/// envelope so that modes engulfing several ranks per period still fit an
/// exact line). Empty when fewer than three usable points remain.
std::optional<SpeedEstimate> estimate_speed(const WaveFronts& fronts);

/// Speed from the front's slope in the (hop, step) lattice, converted to
/// ranks/s with the nominal period. The step-space slope is what the
/// per-step timeline plots show; it stays at sigma*d ranks per step under
/// noise, whereas wall-clock arrivals also carry the noise inflation of
/// every clock involved.
std::optional<SpeedEstimate> estimate_speed_steps(const WaveFronts& fronts, double period_us);

struct DecayEstimate {
  double beta_us_per_rank = 0.0;
  std::vector<double> per_rank_amplitude_us;  // ordered by hop distance
  double fit_r2 = 0.0;
};

/// Wave amplitude per reached rank = the largest single idle record within
/// `window_steps` steps of the front arrival; beta is the negated
/// least-squares slope of amplitude vs. hop distance in us/rank.
std::optional<DecayEstimate> estimate_decay(const IdleMatrix& idle, const WaveFronts& fronts,
                                            int window_steps = 3);

struct PairCancellation {
  int rank_a = 0;
  int rank_b = 0;
  int meet_rank = 0;
  int meet_step = 0;
  bool full = true;
  std::optional<int> surviving_injection;  // rank of the stronger injection
  double residual_amplitude_us = 0.0;
};

struct CancellationReport {
  std::vector<PairCancellation> pairs;
};

/// Where counter-propagating waves from adjacent injections meet, and
/// whether they annihilate (full) or the stronger one passes through
/// (partial, detected as a second idle episode beyond the meeting point).
CancellationReport detect_cancellation(const std::vector<WaveFronts>& fronts_list,
                                       const IdleMatrix& idle);

/// Max over ranks of the completion-time difference (delayed - baseline).
/// Both runs must share everything except the injected delays, and the
/// baseline must be delay-free.
double excess_runtime(const Trace& trace_with_delay, const Scenario& scenario_with_delay,
                      const Trace& trace_baseline, const Scenario& scenario_baseline);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 1.0;
};

/// Ordinary least squares on (x, y); r2 is 1 for a perfectly explained or
/// degenerate (constant-y) fit.
LinearFit linear_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace idlewave

#endif
