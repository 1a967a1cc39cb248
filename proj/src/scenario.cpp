#include "idlewave/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace idlewave {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

struct Fnv1a {
  std::uint64_t h = 0xCBF29CE484222325ULL;

  void feed(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001B3ULL;
    }
  }
  void feed_i64(std::int64_t v) { feed(&v, sizeof v); }
  void feed_u64(std::uint64_t v) { feed(&v, sizeof v); }
  void feed_f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    feed_u64(bits);
  }
};

std::string digest_impl(const Scenario& sc, bool include_delays) {
  Fnv1a f;
  f.feed_i64(sc.n_ranks);
  f.feed_i64(sc.n_steps);
  f.feed_f64(sc.t_exec_us);
  f.feed_i64(static_cast<int>(sc.topology.direction));
  f.feed_i64(static_cast<int>(sc.topology.boundary));
  f.feed_i64(sc.topology.distance_d);
  f.feed_i64(sc.protocol_cfg.message_size_bytes);
  f.feed_i64(sc.protocol_cfg.eager_limit_bytes);
  f.feed_i64(static_cast<int>(sc.protocol_cfg.override_mode));
  f.feed_i64(sc.protocol_cfg.eager_buffer_limit ? *sc.protocol_cfg.eager_buffer_limit : -1);
  f.feed_f64(sc.cost_model.latency_us);
  f.feed_f64(sc.cost_model.bandwidth_bytes_per_us);
  f.feed_f64(sc.noise.mean_relative_delay);
  f.feed_i64(sc.noise.enabled ? 1 : 0);
  if (include_delays) {
    f.feed_i64(static_cast<std::int64_t>(sc.delays.size()));
    for (const auto& d : sc.delays) {
      f.feed_i64(d.rank);
      f.feed_i64(d.step);
      f.feed_f64(d.duration_us);
    }
  }
  f.feed_u64(sc.seed);

  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(f.h));
  return buf;
}

}  // namespace

void validate_scenario(const Scenario& sc) {
  require(sc.n_ranks >= 2, "scenario.n_ranks: must be >= 2");
  require(sc.n_steps >= 1, "scenario.n_steps: must be >= 1");
  require(std::isfinite(sc.t_exec_us) && sc.t_exec_us >= 0.0,
          "scenario.t_exec_us: must be finite and >= 0");
  require(sc.topology.distance_d >= 1, "scenario.topology.distance: must be >= 1");
  require(sc.topology.distance_d < sc.n_ranks,
          "scenario.topology.distance: neighbor distance must be < n_ranks");
  require(sc.protocol_cfg.message_size_bytes >= 0,
          "scenario.protocol.message_size_bytes: must be >= 0");
  require(sc.protocol_cfg.eager_limit_bytes >= 0,
          "scenario.protocol.eager_limit_bytes: must be >= 0");
  if (sc.protocol_cfg.eager_buffer_limit)
    require(*sc.protocol_cfg.eager_buffer_limit >= 0,
            "scenario.protocol.eager_buffer_limit: must be >= 0");
  require(std::isfinite(sc.cost_model.latency_us) && sc.cost_model.latency_us >= 0.0,
          "scenario.cost_model.latency_us: must be finite and >= 0");
  require(sc.cost_model.bandwidth_bytes_per_us > 0.0,
          "scenario.cost_model.bandwidth_bytes_per_us: must be > 0");
  require(sc.noise.mean_relative_delay >= 0.0,
          "scenario.noise.mean_relative_delay: must be >= 0");
  for (const auto& d : sc.delays) {
    require(d.rank >= 0 && d.rank < sc.n_ranks,
            "scenario.delays[].rank: must be in [0, n_ranks)");
    require(d.step >= 1 && d.step <= sc.n_steps,
            "scenario.delays[].step: must be in [1, n_steps]");
    require(std::isfinite(d.duration_us) && d.duration_us > 0.0,
            "scenario.delays[].duration_us: must be finite and > 0");
  }
}

std::string scenario_digest(const Scenario& sc) { return digest_impl(sc, true); }

std::string scenario_digest_ignoring_delays(const Scenario& sc) {
  return digest_impl(sc, false);
}

const char* to_string(Direction d) {
  return d == Direction::Unidirectional ? "unidirectional" : "bidirectional";
}

const char* to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

const char* to_string(Protocol p) { return p == Protocol::Eager ? "eager" : "rendezvous"; }

const char* to_string(ProtocolOverride o) {
  switch (o) {
    case ProtocolOverride::None: return "none";
    case ProtocolOverride::ForceEager: return "eager";
    case ProtocolOverride::ForceRendezvous: return "rendezvous";
  }
  return "none";
}

}  // namespace idlewave
