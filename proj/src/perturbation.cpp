#include "idlewave/perturbation.hpp"

#include <cmath>

namespace idlewave {

double sample_noise(const NoiseSpec& spec, double t_exec_us, Xoshiro256StarStar& rng) {
  const double u = rng.next_uniform_open_closed();  // always consume one draw
  if (!spec.enabled || spec.mean_relative_delay <= 0.0) return 0.0;
  return t_exec_us * (-spec.mean_relative_delay * std::log(u));
}

NoiseStreams::NoiseStreams(std::uint64_t scenario_seed, int n_ranks) {
  streams_.reserve(static_cast<std::size_t>(n_ranks));
  for (int r = 0; r < n_ranks; ++r)
    streams_.emplace_back(mix_rank_seed(scenario_seed, r));
}

namespace {

std::uint64_t delay_key(int rank, int step) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(rank)) << 32) |
         static_cast<std::uint32_t>(step);
}

}  // namespace

DelayTable::DelayTable(const std::vector<DelaySpec>& delays) {
  for (const auto& d : delays) table_[delay_key(d.rank, d.step)] += d.duration_us;
}

double DelayTable::at(int rank, int step) const {
  auto it = table_.find(delay_key(rank, step));
  return it == table_.end() ? 0.0 : it->second;
}

double injected_delay(int rank, int step, const std::vector<DelaySpec>& delays) {
  double sum = 0.0;
  for (const auto& d : delays)
    if (d.rank == rank && d.step == step) sum += d.duration_us;
  return sum;
}

}  // namespace idlewave
