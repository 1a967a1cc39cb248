#include "idlewave/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "idlewave/comm_model.hpp"

namespace idlewave {

IdleMatrix idle_matrix(const Trace& trace, const Scenario& scenario) {
  IdleMatrix m;
  m.idle_us = Eigen::MatrixXd::Zero(scenario.n_ranks, scenario.n_steps);
  m.idle_start_us = Eigen::MatrixXd::Constant(scenario.n_ranks, scenario.n_steps,
                                              std::numeric_limits<double>::quiet_NaN());
  m.baseline_comm_us = message_cost(scenario.protocol_cfg.message_size_bytes, scenario.cost_model);
  m.t_exec_us = scenario.t_exec_us;
  m.topology = scenario.topology;
  m.protocol = classify_protocol(scenario.protocol_cfg.message_size_bytes, scenario.protocol_cfg);

  for (const auto& rec : trace.records) {
    if (rec.rank < 0 || rec.rank >= scenario.n_ranks || rec.step < 1 ||
        rec.step > scenario.n_steps)
      throw std::invalid_argument("idle_matrix: trace does not match the scenario dimensions");
    if (rec.kind != PhaseKind::Idle) continue;
    const int k = rec.step - 1;
    if (std::isnan(m.idle_start_us(rec.rank, k)))
      m.idle_start_us(rec.rank, k) = rec.t_start_us;
    m.idle_us(rec.rank, k) += rec.t_end_us - rec.t_start_us;
  }
  return m;
}

std::optional<int> hop_distance(int rank, int injection_rank, int n_ranks,
                                const Topology& topo, Protocol protocol) {
  if (rank == injection_rank) return 0;

  const auto forward = [&]() -> std::optional<int> {
    if (topo.boundary == Boundary::Periodic)
      return ((rank - injection_rank) % n_ranks + n_ranks) % n_ranks;
    return rank > injection_rank ? std::optional<int>(rank - injection_rank) : std::nullopt;
  }();
  const auto backward = [&]() -> std::optional<int> {
    if (topo.boundary == Boundary::Periodic)
      return ((injection_rank - rank) % n_ranks + n_ranks) % n_ranks;
    return rank < injection_rank ? std::optional<int>(injection_rank - rank) : std::nullopt;
  }();

  // Only an eager unidirectional wave is one-sided; rendezvous backpressure
  // and bidirectional exchanges spread the wave both ways.
  const bool one_sided =
      topo.direction == Direction::Unidirectional && protocol == Protocol::Eager;
  if (one_sided) return forward;
  if (forward && backward) return std::min(*forward, *backward);
  return forward ? forward : backward;
}

WaveFronts detect_fronts(const IdleMatrix& idle, int injection_rank, int injection_step,
                         double theta, FrontThreshold mode) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("detect_fronts: theta must be in (0, 1)");

  WaveFronts fronts;
  fronts.injection_rank = injection_rank;
  fronts.injection_step = injection_step;
  fronts.threshold_theta = theta;
  fronts.arrivals.assign(static_cast<std::size_t>(idle.n_ranks()), std::nullopt);

  for (int p = 0; p < idle.n_ranks(); ++p) {
    if (p == injection_rank) continue;
    const auto hop = hop_distance(p, injection_rank, idle.n_ranks(), idle.topology, idle.protocol);
    if (!hop) continue;
    const double threshold = mode == FrontThreshold::ExecFraction
                                 ? theta * idle.t_exec_us
                                 : theta * idle.idle_us.row(p).maxCoeff();
    if (threshold <= 0.0) continue;
    for (int k = injection_step - 1; k < idle.n_steps(); ++k) {
      if (idle.idle_us(p, k) >= threshold) {
        fronts.arrivals[static_cast<std::size_t>(p)] =
            FrontArrival{idle.idle_start_us(p, k), k + 1, *hop};
        break;
      }
    }
  }
  return fronts;
}

LinearFit linear_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::ArrayXd dx = x.array() - mx;
  const Eigen::ArrayXd dy = y.array() - my;
  const double sxx = (dx * dx).sum();
  const double sxy = (dx * dy).sum();

  LinearFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  const double ss_tot = (dy * dy).sum();
  const Eigen::ArrayXd resid = dy - fit.slope * dx;
  const double ss_res = (resid * resid).sum();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

// Earliest arrival ordinate per hop, filtered down to the monotone
// leading-edge envelope, then fitted ordinate-vs-hop.
std::optional<LinearFit> front_envelope_fit(const WaveFronts& fronts,
                                            double (*ordinate)(const FrontArrival&),
                                            int* n_points_out) {
  std::map<int, double> earliest;
  for (const auto& a : fronts.arrivals) {
    if (!a || a->hop <= 0) continue;
    const double t = ordinate(*a);
    auto [it, inserted] = earliest.try_emplace(a->hop, t);
    if (!inserted) it->second = std::min(it->second, t);
  }

  std::vector<double> hops, times;
  double last = -std::numeric_limits<double>::infinity();
  for (const auto& [h, t] : earliest) {
    if (t > last) {
      hops.push_back(static_cast<double>(h));
      times.push_back(t);
      last = t;
    }
  }
  if (hops.size() < 3) return std::nullopt;
  *n_points_out = static_cast<int>(hops.size());

  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
      hops.data(), static_cast<Eigen::Index>(hops.size()));
  const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(
      times.data(), static_cast<Eigen::Index>(times.size()));
  return linear_fit(x, y);
}

}  // namespace

std::optional<SpeedEstimate> estimate_speed(const WaveFronts& fronts) {
  int n_points = 0;
  const auto fit =
      front_envelope_fit(fronts, [](const FrontArrival& a) { return a.t_us; }, &n_points);
  if (!fit || !(fit->slope > 0.0)) return std::nullopt;
  return SpeedEstimate{1e6 / fit->slope, fit->r2, n_points};
}

std::optional<SpeedEstimate> estimate_speed_steps(const WaveFronts& fronts, double period_us) {
  if (!(period_us > 0.0))
    throw std::invalid_argument("estimate_speed_steps: period must be > 0");
  int n_points = 0;
  const auto fit = front_envelope_fit(
      fronts, [](const FrontArrival& a) { return static_cast<double>(a.step); }, &n_points);
  if (!fit || !(fit->slope > 0.0)) return std::nullopt;
  return SpeedEstimate{1e6 / (fit->slope * period_us), fit->r2, n_points};
}

std::optional<DecayEstimate> estimate_decay(const IdleMatrix& idle, const WaveFronts& fronts,
                                            int window_steps) {
  if (window_steps < 1) throw std::invalid_argument("estimate_decay: window must be >= 1");

  std::vector<std::pair<int, double>> points;  // (hop, amplitude)
  for (int p = 0; p < idle.n_ranks(); ++p) {
    const auto& a = fronts.arrivals[static_cast<std::size_t>(p)];
    if (!a) continue;
    const int k0 = a->step - 1;
    const int k1 = std::min(idle.n_steps(), k0 + window_steps);
    double amp = 0.0;
    for (int k = k0; k < k1; ++k) amp = std::max(amp, idle.idle_us(p, k));
    points.emplace_back(a->hop, amp);
  }
  if (points.size() < 3) return std::nullopt;
  std::sort(points.begin(), points.end());

  Eigen::VectorXd x(static_cast<Eigen::Index>(points.size()));
  Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x[i] = points[static_cast<std::size_t>(i)].first;
    y[i] = points[static_cast<std::size_t>(i)].second;
  }
  const LinearFit fit = linear_fit(x, y);

  DecayEstimate est;
  est.beta_us_per_rank = -fit.slope;
  est.fit_r2 = fit.r2;
  est.per_rank_amplitude_us.reserve(points.size());
  for (const auto& [hop, amp] : points) est.per_rank_amplitude_us.push_back(amp);
  return est;
}

namespace {

// Idle episodes of one rank: maximal runs of consecutive steps at or above
// the threshold. Returns (first_step, max_amplitude) per episode, 1-based.
std::vector<std::pair<int, double>> idle_episodes(const IdleMatrix& idle, int rank,
                                                  double threshold) {
  std::vector<std::pair<int, double>> episodes;
  bool open = false;
  for (int k = 0; k < idle.n_steps(); ++k) {
    if (idle.idle_us(rank, k) >= threshold) {
      if (!open) {
        episodes.emplace_back(k + 1, idle.idle_us(rank, k));
        open = true;
      } else {
        episodes.back().second = std::max(episodes.back().second, idle.idle_us(rank, k));
      }
    } else {
      open = false;
    }
  }
  return episodes;
}

}  // namespace

CancellationReport detect_cancellation(const std::vector<WaveFronts>& fronts_list,
                                       const IdleMatrix& idle) {
  CancellationReport report;
  if (fronts_list.empty()) return report;

  std::set<int> unique_ranks;
  for (const auto& f : fronts_list) unique_ranks.insert(f.injection_rank);
  const std::vector<int> injections(unique_ranks.begin(), unique_ranks.end());

  const double theta = fronts_list.front().threshold_theta;
  const double threshold = theta * idle.t_exec_us;
  const int n = idle.n_ranks();
  const bool periodic = idle.topology.boundary == Boundary::Periodic;
  const bool one_sided =
      idle.topology.direction == Direction::Unidirectional && idle.protocol == Protocol::Eager;

  // A single injection on a ring sends two counter-propagating arms that
  // meet at the far side; treat it as a pair with itself. Anything else
  // with a single injection has nothing to cancel.
  if (injections.size() < 2 && (!periodic || one_sided || injections.empty())) return report;

  const std::size_t n_pairs =
      injections.size() == 1 ? 1 : (periodic ? injections.size() : injections.size() - 1);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const int a = injections[i];
    const int b = injections[(i + 1) % injections.size()];

    PairCancellation pc;
    pc.rank_a = a;
    pc.rank_b = b;

    // Walk the segment strictly between the two injections (the whole
    // remaining ring for a self-pair).
    double latest_arrival = -1.0;
    bool second_episode_seen = false;
    const int seg_len = a == b ? n - 1 : ((b - a) % n + n) % n - 1;
    for (int off = 1; off <= seg_len; ++off) {
      const int p = (a + off) % n;
      const auto episodes = idle_episodes(idle, p, threshold);
      if (episodes.empty()) continue;
      const int first_step = episodes.front().first;
      const double arrival = idle.idle_start_us(p, first_step - 1);
      if (arrival > latest_arrival) {
        latest_arrival = arrival;
        pc.meet_rank = p;
        pc.meet_step = first_step;
      }
      if (episodes.size() >= 2) second_episode_seen = true;
    }
    if (latest_arrival < 0.0) continue;  // waves never met in this segment

    pc.full = !second_episode_seen;
    if (!pc.full) {
      // The surviving wave is the one that started out stronger; measure
      // both waves right next to their injections.
      const auto amp_near = [&](int injection, int step_toward) {
        const int p = ((injection + step_toward) % n + n) % n;
        const auto eps = idle_episodes(idle, p, threshold);
        return eps.empty() ? 0.0 : eps.front().second;
      };
      const double amp_a = amp_near(a, +1);
      const double amp_b = amp_near(b, -1);
      pc.surviving_injection = amp_a >= amp_b ? a : b;
      pc.residual_amplitude_us = std::abs(amp_a - amp_b);
    }
    report.pairs.push_back(pc);
  }
  return report;
}

double excess_runtime(const Trace& trace_with_delay, const Scenario& scenario_with_delay,
                      const Trace& trace_baseline, const Scenario& scenario_baseline) {
  if (!scenario_baseline.delays.empty())
    throw std::invalid_argument("excess_runtime: baseline run must have no injected delays");
  if (scenario_digest_ignoring_delays(scenario_with_delay) !=
      scenario_digest_ignoring_delays(scenario_baseline))
    throw std::invalid_argument("excess_runtime: scenarios differ beyond their delay lists");
  if (trace_with_delay.final_time_us.size() != trace_baseline.final_time_us.size())
    throw std::invalid_argument("excess_runtime: traces have different rank counts");

  double excess = 0.0;
  for (std::size_t p = 0; p < trace_with_delay.final_time_us.size(); ++p)
    excess = std::max(excess, trace_with_delay.final_time_us[p] - trace_baseline.final_time_us[p]);
  return excess;
}

}  // namespace idlewave
