#include "idlewave/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "idlewave/analysis.hpp"
#include "idlewave/comm_model.hpp"
#include "idlewave/simulate.hpp"
#include "idlewave/trace_io.hpp"

namespace idlewave {

namespace {

using ordered_json = nlohmann::ordered_json;

FrontThreshold front_mode_for(const Scenario& sc) {
  // Against fine-grained noise the fixed exec-fraction threshold fires on
  // the noise floor; anchor the threshold to each rank's peak idle instead.
  const bool noisy = sc.noise.enabled && sc.noise.mean_relative_delay > 0.0;
  return noisy ? FrontThreshold::PeakFraction : FrontThreshold::ExecFraction;
}

double front_theta_for(const ExperimentConfig& cfg, FrontThreshold mode) {
  // PeakFraction hunts the wave itself; half the peak is robustly above the
  // noise floor and insensitive to trailing-edge erosion.
  return mode == FrontThreshold::PeakFraction ? 0.5 : cfg.analysis.theta;
}

std::vector<std::pair<int, int>> injection_points(const Scenario& sc) {
  std::set<int> seen;
  std::vector<std::pair<int, int>> points;
  for (const auto& d : sc.delays)
    if (seen.insert(d.rank).second) points.emplace_back(d.rank, d.step);
  return points;
}

ordered_json speed_json(const SpeedEstimate& est) {
  return {{"v_ranks_per_s", est.v_ranks_per_s},
          {"fit_r2", est.fit_r2},
          {"n_points", est.n_points}};
}

ordered_json cancellation_json(const CancellationReport& report) {
  ordered_json pairs = ordered_json::array();
  for (const auto& pc : report.pairs) {
    ordered_json p;
    p["rank_a"] = pc.rank_a;
    p["rank_b"] = pc.rank_b;
    p["meet_rank"] = pc.meet_rank;
    p["meet_step"] = pc.meet_step;
    p["kind"] = pc.full ? "full" : "partial";
    if (pc.surviving_injection) {
      p["surviving_injection"] = *pc.surviving_injection;
      p["residual_amplitude_us"] = pc.residual_amplitude_us;
    }
    pairs.push_back(p);
  }
  return {{"pairs", pairs}};
}

}  // namespace

nlohmann::ordered_json analyze_trace(const ExperimentConfig& cfg, const Trace& trace) {
  const Scenario& sc = cfg.scenario;
  const IdleMatrix idle = idle_matrix(trace, sc);
  const auto injections = injection_points(sc);
  const FrontThreshold mode = front_mode_for(sc);
  const double theta = front_theta_for(cfg, mode);

  ordered_json analysis;
  analysis["baseline_comm_us"] = idle.baseline_comm_us;
  analysis["total_idle_us"] = idle.idle_us.sum();
  {
    std::vector<double> by_rank(static_cast<std::size_t>(idle.n_ranks()));
    for (int p = 0; p < idle.n_ranks(); ++p)
      by_rank[static_cast<std::size_t>(p)] = idle.idle_us.row(p).sum();
    std::vector<double> by_step(static_cast<std::size_t>(idle.n_steps()));
    for (int k = 0; k < idle.n_steps(); ++k)
      by_step[static_cast<std::size_t>(k)] = idle.idle_us.col(k).sum();
    analysis["per_rank_idle_us"] = by_rank;
    analysis["per_step_idle_us"] = by_step;
  }
  analysis["theta"] = cfg.analysis.theta;
  analysis["window_steps"] = cfg.analysis.window_steps;
  analysis["front_threshold"] =
      mode == FrontThreshold::PeakFraction ? "peak_fraction" : "exec_fraction";

  ordered_json inj = ordered_json::array();
  for (const auto& [rank, step] : injections) inj.push_back({{"rank", rank}, {"step", step}});
  analysis["injections"] = inj;

  const double period_us = sc.t_exec_us + idle.baseline_comm_us;
  if (period_us > 0.0)
    analysis["v_model_ranks_per_s"] = propagation_speed_model(
        sc.t_exec_us, idle.baseline_comm_us, sc.topology.distance_d, sc.topology.direction,
        idle.protocol);

  if (injections.size() == 1) {
    const auto [rank, step] = injections.front();
    const WaveFronts fronts = detect_fronts(idle, rank, step, theta, mode);

    ordered_json arrivals = ordered_json::array();
    for (int p = 0; p < idle.n_ranks(); ++p) {
      const auto& a = fronts.arrivals[static_cast<std::size_t>(p)];
      if (!a) continue;
      arrivals.push_back(
          {{"rank", p}, {"hop", a->hop}, {"step", a->step}, {"t_arrival_us", a->t_us}});
    }
    analysis["front_arrivals"] = arrivals;

    if (const auto est = estimate_speed(fronts)) analysis["speed"] = speed_json(*est);
    if (const auto dec = estimate_decay(idle, fronts, cfg.analysis.window_steps)) {
      analysis["decay"] = {{"beta_us_per_rank", dec->beta_us_per_rank},
                           {"fit_r2", dec->fit_r2},
                           {"n_ranks_fitted", dec->per_rank_amplitude_us.size()}};
    }
    // On a ring the two arms of a single injection can still meet and cancel.
    const auto self_cancel = detect_cancellation({fronts}, idle);
    if (!self_cancel.pairs.empty()) analysis["cancellation"] = cancellation_json(self_cancel);
  } else if (injections.size() >= 2) {
    std::vector<WaveFronts> fronts_list;
    fronts_list.reserve(injections.size());
    for (const auto& [rank, step] : injections)
      fronts_list.push_back(detect_fronts(idle, rank, step, theta, mode));
    analysis["cancellation"] = cancellation_json(detect_cancellation(fronts_list, idle));
  }

  ordered_json summary;
  if (cfg.preset_name) summary["preset"] = *cfg.preset_name;
  summary["config"] = ordered_json::parse(serialize_config(cfg));
  summary["scenario_digest"] = trace.scenario_digest.empty() ? scenario_digest(sc)
                                                             : trace.scenario_digest;
  summary["final_time_us"] = trace.final_time_us;
  summary["analysis"] = analysis;
  return summary;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_scenario(cfg.scenario);
  ExperimentResult result;
  result.trace = simulate(cfg.scenario);
  result.summary = analyze_trace(cfg, result.trace);

  if (!cfg.scenario.delays.empty()) {
    Scenario baseline = cfg.scenario;
    baseline.delays.clear();
    const Trace base_trace = simulate(baseline);
    result.summary["analysis"]["excess_runtime_us"] =
        excess_runtime(result.trace, cfg.scenario, base_trace, baseline);
  }
  return result;
}

namespace {

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Scenario apply_sweep_value(Scenario sc, SweepParameter param, double value) {
  switch (param) {
    case SweepParameter::NoiseMean:
      sc.noise.mean_relative_delay = value;
      sc.noise.enabled = value > 0.0;
      break;
    case SweepParameter::Distance:
      sc.topology.distance_d = static_cast<int>(value);
      break;
    case SweepParameter::MessageSize:
      sc.protocol_cfg.message_size_bytes = static_cast<std::int64_t>(value);
      break;
    case SweepParameter::NRanks:
      sc.n_ranks = static_cast<int>(value);
      break;
  }
  return sc;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  if (!cfg.sweep) throw std::invalid_argument("run_sweep: config has no sweep section");
  if (cfg.scenario.delays.empty())
    throw std::invalid_argument("run_sweep: decay/speed sweeps need an injected delay");

  std::vector<SweepRow> rows;
  for (const double value : cfg.sweep->values) {
    SweepRow row;
    row.value = value;
    std::vector<double> betas, speeds;

    for (int rep = 0; rep < cfg.sweep->repetitions; ++rep) {
      Scenario sc = apply_sweep_value(cfg.scenario, cfg.sweep->parameter, value);
      sc.seed = cfg.scenario.seed + static_cast<std::uint64_t>(rep);
      try {
        validate_scenario(sc);
        const Trace trace = simulate(sc);
        const IdleMatrix idle = idle_matrix(trace, sc);
        const auto injections = injection_points(sc);
        const FrontThreshold mode = front_mode_for(sc);
        ExperimentConfig run_cfg = cfg;
        run_cfg.scenario = sc;
        const double theta = front_theta_for(run_cfg, mode);
        const WaveFronts fronts =
            detect_fronts(idle, injections.front().first, injections.front().second, theta, mode);
        if (const auto est = estimate_speed(fronts)) speeds.push_back(est->v_ranks_per_s);
        if (const auto dec = estimate_decay(idle, fronts, cfg.analysis.window_steps))
          betas.push_back(dec->beta_us_per_rank);
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep failed at " + std::string(to_string(cfg.sweep->parameter)) +
                                 "=" + std::to_string(value) + ", seed " +
                                 std::to_string(sc.seed) + ": " + e.what());
      }
    }

    row.n_seeds = static_cast<int>(std::max(betas.size(), speeds.size()));
    if (!betas.empty()) {
      row.beta_median = median_of(betas);
      row.beta_min = *std::min_element(betas.begin(), betas.end());
      row.beta_max = *std::max_element(betas.begin(), betas.end());
    }
    if (!speeds.empty()) {
      row.v_median = median_of(speeds);
      row.v_min = *std::min_element(speeds.begin(), speeds.end());
      row.v_max = *std::max_element(speeds.begin(), speeds.end());
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(const ExperimentConfig& cfg, const std::vector<SweepRow>& rows) {
  std::string out =
      "parameter,value,seeds,beta_median_us_per_rank,beta_min_us_per_rank,"
      "beta_max_us_per_rank,v_median_ranks_per_s,v_min_ranks_per_s,v_max_ranks_per_s\n";
  char line[256];
  const char* param = cfg.sweep ? to_string(cfg.sweep->parameter) : "none";
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s,%.6g,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", param, r.value,
                  r.n_seeds, r.beta_median, r.beta_min, r.beta_max, r.v_median, r.v_min, r.v_max);
    out += line;
  }
  return out;
}

void write_experiment_artifacts(const std::string& dir, const ExperimentResult& result) {
  write_text_atomic(dir + "/trace.csv", trace_to_csv(result.trace));
  write_text_atomic(dir + "/summary.json", result.summary.dump(2) + "\n");
}

}  // namespace idlewave
