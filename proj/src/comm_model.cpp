#include "idlewave/comm_model.hpp"

#include <stdexcept>

namespace idlewave {

Protocol classify_protocol(std::int64_t size_bytes, const ProtocolConfig& cfg) {
  switch (cfg.override_mode) {
    case ProtocolOverride::ForceEager: return Protocol::Eager;
    case ProtocolOverride::ForceRendezvous: return Protocol::Rendezvous;
    case ProtocolOverride::None: break;
  }
  // Inclusive limit: a message exactly at the eager limit is still eager.
  return size_bytes <= cfg.eager_limit_bytes ? Protocol::Eager : Protocol::Rendezvous;
}

double message_cost(std::int64_t size_bytes, const CostModel& cm) {
  return cm.latency_us + static_cast<double>(size_bytes) / cm.bandwidth_bytes_per_us;
}

int sigma_factor(Direction direction, Protocol protocol) {
  return (direction == Direction::Bidirectional && protocol == Protocol::Rendezvous) ? 2 : 1;
}

double propagation_speed_model(double t_exec_us, double t_comm_us, int distance_d,
                               Direction direction, Protocol protocol) {
  const double period_us = t_exec_us + t_comm_us;
  if (!(period_us > 0.0))
    throw std::invalid_argument("propagation_speed_model: T_exec + T_comm must be > 0");
  if (distance_d < 1)
    throw std::invalid_argument("propagation_speed_model: distance d must be >= 1");
  const double sigma = static_cast<double>(sigma_factor(direction, protocol));
  return sigma * static_cast<double>(distance_d) / period_us * 1e6;
}

namespace {

std::vector<int> neighbors(int rank, int n_ranks, const Topology& topo, bool forward_first) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(2 * topo.distance_d));
  auto push = [&](int offset) {
    int q = rank + offset;
    if (topo.boundary == Boundary::Periodic) {
      q = ((q % n_ranks) + n_ranks) % n_ranks;
      out.push_back(q);
    } else if (q >= 0 && q < n_ranks) {
      out.push_back(q);
    }
  };
  const int first_sign = forward_first ? 1 : -1;
  for (int o = 1; o <= topo.distance_d; ++o) push(first_sign * o);
  if (topo.direction == Direction::Bidirectional)
    for (int o = 1; o <= topo.distance_d; ++o) push(-first_sign * o);
  return out;
}

}  // namespace

std::vector<int> send_targets(int rank, int n_ranks, const Topology& topo) {
  // Unidirectional: sends go to higher ranks only.
  return neighbors(rank, n_ranks, topo, /*forward_first=*/true);
}

std::vector<int> recv_sources(int rank, int n_ranks, const Topology& topo) {
  return neighbors(rank, n_ranks, topo, /*forward_first=*/false);
}

}  // namespace idlewave
