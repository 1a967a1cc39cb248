#ifndef IDLEWAVE_TESTS_ORACLE_HPP
#define IDLEWAVE_TESTS_ORACLE_HPP

// Brute-force reference evaluator for the step semantics, independent of the
// engine's forward sweep: it relaxes the completion-time recurrences over all
// (rank, step) cells in shuffled order until a fixed point is reached. Test
// support only; never linked into the library.

#include <algorithm>
#include <cassert>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "idlewave/comm_model.hpp"
#include "idlewave/perturbation.hpp"
#include "idlewave/scenario.hpp"

namespace idlewave::testing {

struct OracleResult {
  // Indexed [rank][step-1].
  std::vector<std::vector<double>> compute_end;
  std::vector<std::vector<double>> waitall;
};

inline OracleResult oracle_evaluate(const Scenario& sc) {
  if (sc.protocol_cfg.eager_buffer_limit)
    throw std::invalid_argument("oracle does not model eager buffer caps");

  const int n = sc.n_ranks;
  const int steps = sc.n_steps;
  const double t = sc.t_exec_us;
  const double cost = message_cost(sc.protocol_cfg.message_size_bytes, sc.cost_model);
  const Protocol proto = classify_protocol(sc.protocol_cfg.message_size_bytes, sc.protocol_cfg);

  // Noise and injected delays are inputs to the recurrences; pre-sample them
  // once in (rank-major, step-minor) order.
  std::vector<std::vector<double>> noise(n, std::vector<double>(steps, 0.0));
  {
    NoiseStreams streams(sc.seed, n);
    for (int p = 0; p < n; ++p)
      for (int k = 0; k < steps; ++k) noise[p][k] = streams.sample(p, sc.noise, t);
  }
  std::vector<std::vector<double>> delay(n, std::vector<double>(steps, 0.0));
  for (int p = 0; p < n; ++p)
    for (int k = 0; k < steps; ++k) delay[p][k] = injected_delay(p, k + 1, sc.delays);

  std::vector<std::vector<int>> out(n), in(n);
  for (int p = 0; p < n; ++p) {
    out[p] = send_targets(p, n, sc.topology);
    in[p] = recv_sources(p, n, sc.topology);
  }

  std::vector<std::vector<double>> E(n, std::vector<double>(steps, 0.0));
  std::vector<std::vector<double>> H(n, std::vector<double>(steps, 0.0));
  std::vector<std::vector<double>> W(n, std::vector<double>(steps, 0.0));

  std::vector<std::pair<int, int>> cells;
  for (int p = 0; p < n; ++p)
    for (int k = 0; k < steps; ++k) cells.emplace_back(p, k);
  std::mt19937 shuffler(12345);

  bool changed = true;
  int rounds = 0;
  while (changed) {
    if (++rounds > 10 * n * steps + 100)
      throw std::runtime_error("oracle failed to reach a fixed point");
    changed = false;
    std::shuffle(cells.begin(), cells.end(), shuffler);
    for (auto [p, k] : cells) {
      double e = (k == 0 ? 0.0 : W[p][k - 1]) + t;
      e = e + noise[p][k];
      e = e + delay[p][k];

      double h = e;
      if (proto == Protocol::Rendezvous)
        for (int q : out[p]) h = std::max(h, E[q][k]);

      double w = e;
      if (proto == Protocol::Eager) {
        for (int s : in[p]) w = std::max(w, std::max(e, E[s][k] + cost));
        // eager sends complete at the local post time; no contribution
      } else {
        if (!out[p].empty()) w = std::max(w, h + cost);
        for (int s : in[p]) w = std::max(w, H[s][k] + cost);
      }

      if (e != E[p][k] || h != H[p][k] || w != W[p][k]) {
        E[p][k] = e;
        H[p][k] = h;
        W[p][k] = w;
        changed = true;
      }
    }
  }

  return {E, W};
}

}  // namespace idlewave::testing

#endif
