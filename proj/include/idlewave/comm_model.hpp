#ifndef IDLEWAVE_COMM_MODEL_HPP
#define IDLEWAVE_COMM_MODEL_HPP

#include <cstdint>
#include <vector>

#include "idlewave/scenario.hpp"

namespace idlewave {

/// Override wins; otherwise eager iff size <= limit (inclusive).
Protocol classify_protocol(std::int64_t size_bytes, const ProtocolConfig& cfg);

/// Hockney cost in microseconds.
double message_cost(std::int64_t size_bytes, const CostModel& cm);

/// 2 for bidirectional rendezvous, 1 for any other mode.
int sigma_factor(Direction direction, Protocol protocol);

/// Analytic idle-wave front speed sigma*d/(T_exec + T_comm) in ranks per
/// second. Throws std::invalid_argument on a zero period.
double propagation_speed_model(double t_exec_us, double t_comm_us, int distance_d,
                               Direction direction, Protocol protocol);

/// Ranks `rank` sends to / receives from under the topology, in a fixed
/// deterministic order (positive offsets ascending, then negative offsets
/// ascending for bidirectional patterns).
std::vector<int> send_targets(int rank, int n_ranks, const Topology& topo);
std::vector<int> recv_sources(int rank, int n_ranks, const Topology& topo);

}  // namespace idlewave

#endif
