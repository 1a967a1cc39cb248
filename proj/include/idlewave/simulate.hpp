#ifndef IDLEWAVE_SIMULATE_HPP
#define IDLEWAVE_SIMULATE_HPP

#include "idlewave/scenario.hpp"
#include "idlewave/trace.hpp"

namespace idlewave {

struct MessageCompletion {
  double send_complete_us = 0.0;
  double recv_complete_us = 0.0;
};

/// Completion times of a single point-to-point message.
///
/// Eager: the sender completes locally at its post time (internal buffering,
/// no handshake); the receive completes once the receive is posted and the
/// data has arrived: max(recv_post, send_post + cost).
///
/// Rendezvous: both sides synchronize on a handshake; the transfer starts at
/// max(send_post, recv_post) and both complete cost_us later.
MessageCompletion resolve_message(double send_post_us, double recv_post_us,
                                  double cost_us, Protocol protocol);

/// Advance all ranks through n_steps compute-communicate steps.
///
/// Per step k, rank p:
///   1. starts at ready(p,k) = waitall completion of step k-1 (0 for k=1);
///   2. computes until compute_end = ready + t_exec + noise + injected delay;
///   3. posts all sends and receives at compute_end (posting takes no time)
///      and blocks in waitall;
///   4. waitall completes at the max over the completion times of all of the
///      rank's step-k sends and receives (and never before compute_end);
///   5. the interval [compute_end, waitall] is recorded as one Comm record of
///      at most the noise-free message cost, followed by an Idle record for
///      any remainder.
///
/// A rank's rendezvous data phase drains as a unit: every rendezvous send of
/// a rank completes only once handshakes with all of its rendezvous targets
/// are established (effective send post = max over the targets' post times).
/// This is what lets a delayed rank hold back its far-side neighbor within
/// the same step and makes bidirectional rendezvous waves travel at 2d ranks
/// per period while every other mode travels at d.
///
/// Deterministic: equal scenarios (including seed) produce identical traces.
Trace simulate(const Scenario& scenario);

}  // namespace idlewave

#endif
