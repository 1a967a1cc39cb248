#ifndef IDLEWAVE_PERTURBATION_HPP
#define IDLEWAVE_PERTURBATION_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "idlewave/rng.hpp"
#include "idlewave/scenario.hpp"

namespace idlewave {

/// One exponential draw: t_exec_us * x with x ~ Exp(lambda = 1/E), sampled
/// by inverse CDF as -E * ln(u), u uniform in (0,1]. Consumes exactly one
/// draw from the stream even when the spec is disabled or E = 0, so noise
/// streams stay comparable across E values under the same seed.
double sample_noise(const NoiseSpec& spec, double t_exec_us, Xoshiro256StarStar& rng);

/// Per-rank noise substreams for one simulation run. Each rank owns an
/// independent stream seeded from (scenario seed, rank); a rank's stream is
/// advanced once per step in step order.
class NoiseStreams {
 public:
  NoiseStreams(std::uint64_t scenario_seed, int n_ranks);

  double sample(int rank, const NoiseSpec& spec, double t_exec_us) {
    return sample_noise(spec, t_exec_us, streams_[static_cast<std::size_t>(rank)]);
  }

 private:
  std::vector<Xoshiro256StarStar> streams_;
};

/// Injected long delays keyed by (rank, step); entries at the same key add up.
class DelayTable {
 public:
  explicit DelayTable(const std::vector<DelaySpec>& delays);

  double at(int rank, int step) const;

 private:
  std::unordered_map<std::uint64_t, double> table_;
};

/// Sum of all delay durations matching (rank, step); 0 if none.
double injected_delay(int rank, int step, const std::vector<DelaySpec>& delays);

}  // namespace idlewave

#endif
