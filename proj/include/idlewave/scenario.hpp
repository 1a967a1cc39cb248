#ifndef IDLEWAVE_SCENARIO_HPP
#define IDLEWAVE_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace idlewave {

enum class Direction { Unidirectional, Bidirectional };
enum class Boundary { Open, Periodic };
enum class Protocol { Eager, Rendezvous };
enum class ProtocolOverride { None, ForceEager, ForceRendezvous };

/// 1-D process chain/ring. A rank exchanges messages with all neighbors at
/// offsets 1..distance_d in each active direction; with Open boundary, edge
/// ranks simply omit out-of-range partners.
struct Topology {
  Direction direction = Direction::Unidirectional;
  Boundary boundary = Boundary::Open;
  int distance_d = 1;

  bool operator==(const Topology&) const = default;
};

struct ProtocolConfig {
  std::int64_t message_size_bytes = 8192;
  std::int64_t eager_limit_bytes = 16384;
  ProtocolOverride override_mode = ProtocolOverride::None;
  /// Max outstanding unreceived eager messages per sender. Once the cap is
  /// reached, further sends of that step fall back to rendezvous semantics.
  /// Unset means unbounded buffering.
  std::optional<int> eager_buffer_limit;

  bool operator==(const ProtocolConfig&) const = default;
};

/// Hockney parameters: cost = latency_us + size / bandwidth_bytes_per_us.
struct CostModel {
  double latency_us = 1.0;
  double bandwidth_bytes_per_us = 3000.0;

  bool operator==(const CostModel&) const = default;
};

/// Exponentially distributed per-phase execution noise. mean_relative_delay
/// is the mean extra execution time as a fraction of t_exec_us.
struct NoiseSpec {
  double mean_relative_delay = 0.0;
  bool enabled = false;

  bool operator==(const NoiseSpec&) const = default;
};

/// A one-off long execution delay on one rank at one step. Durations may
/// span several execution phases.
struct DelaySpec {
  int rank = 0;
  int step = 1;  // 1-based
  double duration_us = 0.0;

  bool operator==(const DelaySpec&) const = default;
};

struct Scenario {
  int n_ranks = 2;
  int n_steps = 1;
  double t_exec_us = 0.0;
  Topology topology;
  ProtocolConfig protocol_cfg;
  CostModel cost_model;
  NoiseSpec noise;
  std::vector<DelaySpec> delays;
  std::uint64_t seed = 0;

  bool operator==(const Scenario&) const = default;
};

/// Throws std::invalid_argument naming the offending field.
void validate_scenario(const Scenario& sc);

/// FNV-1a hash of the canonical field serialization, as fixed-width hex.
/// Identical scenarios (including seed) produce identical digests.
std::string scenario_digest(const Scenario& sc);

/// Digest with the delay list blanked out; used to match a delayed run
/// against its delay-free baseline.
std::string scenario_digest_ignoring_delays(const Scenario& sc);

const char* to_string(Direction d);
const char* to_string(Boundary b);
const char* to_string(Protocol p);
const char* to_string(ProtocolOverride o);

}  // namespace idlewave

#endif
