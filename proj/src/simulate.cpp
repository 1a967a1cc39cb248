#include "idlewave/simulate.hpp"

#include <algorithm>
#include <vector>

#include "idlewave/comm_model.hpp"
#include "idlewave/perturbation.hpp"

namespace idlewave {

MessageCompletion resolve_message(double send_post_us, double recv_post_us,
                                  double cost_us, Protocol protocol) {
  if (protocol == Protocol::Eager) {
    // Buffered send: the sender never blocks on the receiver.
    return {send_post_us, std::max(recv_post_us, send_post_us + cost_us)};
  }
  const double complete = std::max(send_post_us, recv_post_us) + cost_us;
  return {complete, complete};
}

namespace {

struct OutgoingMessage {
  int target = 0;
  bool eager = true;
};

}  // namespace

Trace simulate(const Scenario& sc) {
  validate_scenario(sc);

  const int n = sc.n_ranks;
  const double t_exec = sc.t_exec_us;
  const double cost = message_cost(sc.protocol_cfg.message_size_bytes, sc.cost_model);
  const Protocol base_protocol =
      classify_protocol(sc.protocol_cfg.message_size_bytes, sc.protocol_cfg);
  const std::optional<int> cap = sc.protocol_cfg.eager_buffer_limit;

  std::vector<std::vector<int>> targets(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) targets[p] = send_targets(p, n, sc.topology);

  NoiseStreams noise(sc.seed, n);
  const DelayTable delays(sc.delays);

  Trace trace;
  trace.scenario_digest = scenario_digest(sc);
  trace.records.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(sc.n_steps) * 3);
  trace.final_time_us.assign(static_cast<std::size_t>(n), 0.0);

  std::vector<double> ready(static_cast<std::size_t>(n), 0.0);
  std::vector<double> exec_end(n), noise_end(n), compute_end(n), waitall(n);
  std::vector<double> noise_len(n), delay_len(n);
  // Recv-completion times of in-flight eager messages, per sender; only
  // tracked when an eager buffer cap is configured.
  std::vector<std::vector<double>> inflight(static_cast<std::size_t>(n));
  std::vector<std::vector<OutgoingMessage>> outgoing(static_cast<std::size_t>(n));
  std::vector<double> handshake_start(n);  // rendezvous: when a rank's data phase starts

  // Record emission is deferred until the step's waitall times are known.
  std::vector<PhaseRecord> rank_records;

  for (int k = 1; k <= sc.n_steps; ++k) {
    for (int p = 0; p < n; ++p) {
      noise_len[p] = noise.sample(p, sc.noise, t_exec);
      delay_len[p] = delays.at(p, k);
      exec_end[p] = ready[p] + t_exec;
      noise_end[p] = exec_end[p] + noise_len[p];
      compute_end[p] = noise_end[p] + delay_len[p];
    }

    // Decide per-message protocol. With an eager cap, a sender whose buffer
    // is full at post time falls back to rendezvous for the overflow.
    for (int s = 0; s < n; ++s) {
      outgoing[s].clear();
      int outstanding = 0;
      if (cap) {
        auto& fl = inflight[s];
        fl.erase(std::remove_if(fl.begin(), fl.end(),
                                [&](double t) { return t <= compute_end[s]; }),
                 fl.end());
        outstanding = static_cast<int>(fl.size());
      }
      for (int t : targets[s]) {
        bool eager = base_protocol == Protocol::Eager;
        if (eager && cap && outstanding >= *cap) eager = false;
        if (eager && cap) ++outstanding;
        outgoing[s].push_back({t, eager});
      }
    }

    // A rank's rendezvous sends drain together once handshakes with all of
    // its rendezvous targets are established.
    for (int s = 0; s < n; ++s) {
      double handshake = compute_end[s];
      for (const auto& m : outgoing[s])
        if (!m.eager) handshake = std::max(handshake, compute_end[m.target]);
      handshake_start[s] = handshake;
    }

    for (int p = 0; p < n; ++p) waitall[p] = compute_end[p];
    for (int s = 0; s < n; ++s) {
      for (const auto& m : outgoing[s]) {
        // Effective send post: a rendezvous send only drains once the
        // rank's whole handshake phase is established, so it carries the
        // other targets' post times; an eager send posts at compute_end.
        const double send_post = m.eager ? compute_end[s] : handshake_start[s];
        const auto mc = resolve_message(send_post, compute_end[m.target], cost,
                                        m.eager ? Protocol::Eager : Protocol::Rendezvous);
        waitall[s] = std::max(waitall[s], mc.send_complete_us);
        waitall[m.target] = std::max(waitall[m.target], mc.recv_complete_us);
        if (m.eager && cap) inflight[s].push_back(mc.recv_complete_us);
      }
    }

    for (int p = 0; p < n; ++p) {
      trace.records.push_back({p, k, PhaseKind::Exec, ready[p], exec_end[p]});
      if (noise_len[p] > 0.0)
        trace.records.push_back({p, k, PhaseKind::NoiseDelay, exec_end[p], noise_end[p]});
      if (delay_len[p] > 0.0)
        trace.records.push_back({p, k, PhaseKind::InjectedDelay, noise_end[p], compute_end[p]});
      const double interval = waitall[p] - compute_end[p];
      const double comm_end = interval > cost ? compute_end[p] + cost : waitall[p];
      trace.records.push_back({p, k, PhaseKind::Comm, compute_end[p], comm_end});
      if (comm_end < waitall[p])
        trace.records.push_back({p, k, PhaseKind::Idle, comm_end, waitall[p]});
      ready[p] = waitall[p];
    }
  }

  for (int p = 0; p < n; ++p) trace.final_time_us[p] = ready[p];

  // CSV contract wants rows sorted by (rank, t_start); emission above is
  // step-major, so regroup by rank.
  std::stable_sort(trace.records.begin(), trace.records.end(),
                   [](const PhaseRecord& a, const PhaseRecord& b) {
                     if (a.rank != b.rank) return a.rank < b.rank;
                     if (a.t_start_us != b.t_start_us) return a.t_start_us < b.t_start_us;
                     return a.step < b.step;
                   });
  return trace;
}

}  // namespace idlewave
