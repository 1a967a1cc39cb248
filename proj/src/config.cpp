#include "idlewave/config.hpp"

#include <cmath>
#include <initializer_list>
#include <set>
#include <stdexcept>

#include "idlewave/rng.hpp"
#include "json.hpp"

namespace idlewave {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw std::invalid_argument("config: " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double get_number(const json& obj, const std::string& path, const char* key,
                  std::optional<double> def = std::nullopt) {
  if (!obj.contains(key)) {
    if (def) return *def;
    fail(path + "." + key, "required");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& path, const char* key,
                         std::optional<std::int64_t> def = std::nullopt) {
  if (!obj.contains(key)) {
    if (def) return *def;
    fail(path + "." + key, "required");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    fail(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       std::optional<std::string> def = std::nullopt) {
  if (!obj.contains(key)) {
    if (def) return *def;
    fail(path + "." + key, "required");
  }
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Topology parse_topology(const json& obj, const std::string& path) {
  check_keys(obj, path, {"direction", "boundary", "distance"});
  Topology t;
  const std::string dir = get_string(obj, path, "direction", "unidirectional");
  if (dir == "unidirectional")
    t.direction = Direction::Unidirectional;
  else if (dir == "bidirectional")
    t.direction = Direction::Bidirectional;
  else
    fail(path + ".direction", "expected 'unidirectional' or 'bidirectional'");
  const std::string bnd = get_string(obj, path, "boundary", "open");
  if (bnd == "open")
    t.boundary = Boundary::Open;
  else if (bnd == "periodic")
    t.boundary = Boundary::Periodic;
  else
    fail(path + ".boundary", "expected 'open' or 'periodic'");
  t.distance_d = static_cast<int>(get_integer(obj, path, "distance", 1));
  return t;
}

ProtocolConfig parse_protocol(const json& obj, const std::string& path) {
  check_keys(obj, path,
             {"message_size_bytes", "eager_limit_bytes", "override", "eager_buffer_limit"});
  ProtocolConfig p;
  p.message_size_bytes = get_integer(obj, path, "message_size_bytes", 8192);
  p.eager_limit_bytes = get_integer(obj, path, "eager_limit_bytes", 16384);
  if (obj.contains("override") && !obj.at("override").is_null()) {
    const std::string ov = get_string(obj, path, "override");
    if (ov == "eager")
      p.override_mode = ProtocolOverride::ForceEager;
    else if (ov == "rendezvous")
      p.override_mode = ProtocolOverride::ForceRendezvous;
    else if (ov != "none")
      fail(path + ".override", "expected 'eager', 'rendezvous', or 'none'");
  }
  if (obj.contains("eager_buffer_limit") && !obj.at("eager_buffer_limit").is_null())
    p.eager_buffer_limit = static_cast<int>(get_integer(obj, path, "eager_buffer_limit"));
  return p;
}

Scenario parse_scenario(const json& obj, const std::string& path) {
  check_keys(obj, path,
             {"n_ranks", "n_steps", "t_exec_us", "topology", "protocol", "cost_model", "noise",
              "delays", "seed"});
  Scenario sc;
  sc.n_ranks = static_cast<int>(get_integer(obj, path, "n_ranks"));
  sc.n_steps = static_cast<int>(get_integer(obj, path, "n_steps"));
  sc.t_exec_us = get_number(obj, path, "t_exec_us");
  if (obj.contains("topology")) sc.topology = parse_topology(obj.at("topology"), path + ".topology");
  if (obj.contains("protocol"))
    sc.protocol_cfg = parse_protocol(obj.at("protocol"), path + ".protocol");
  if (obj.contains("cost_model")) {
    const auto& cm = obj.at("cost_model");
    const std::string cm_path = path + ".cost_model";
    check_keys(cm, cm_path, {"latency_us", "bandwidth_bytes_per_us"});
    sc.cost_model.latency_us = get_number(cm, cm_path, "latency_us", 1.0);
    sc.cost_model.bandwidth_bytes_per_us = get_number(cm, cm_path, "bandwidth_bytes_per_us", 3000.0);
  }
  if (obj.contains("noise")) {
    const auto& nz = obj.at("noise");
    const std::string nz_path = path + ".noise";
    check_keys(nz, nz_path, {"enabled", "mean_relative_delay"});
    sc.noise.mean_relative_delay = get_number(nz, nz_path, "mean_relative_delay", 0.0);
    if (nz.contains("enabled")) {
      if (!nz.at("enabled").is_boolean()) fail(nz_path + ".enabled", "expected a boolean");
      sc.noise.enabled = nz.at("enabled").get<bool>();
    } else {
      sc.noise.enabled = sc.noise.mean_relative_delay > 0.0;
    }
  }
  if (obj.contains("delays")) {
    if (!obj.at("delays").is_array()) fail(path + ".delays", "expected an array");
    int i = 0;
    for (const auto& d : obj.at("delays")) {
      const std::string dp = path + ".delays[" + std::to_string(i++) + "]";
      check_keys(d, dp, {"rank", "step", "duration_us"});
      DelaySpec spec;
      spec.rank = static_cast<int>(get_integer(d, dp, "rank"));
      spec.step = static_cast<int>(get_integer(d, dp, "step"));
      spec.duration_us = get_number(d, dp, "duration_us");
      sc.delays.push_back(spec);
    }
  }
  if (obj.contains("seed")) {
    const auto& v = obj.at("seed");
    if (v.is_number_unsigned())
      sc.seed = v.get<std::uint64_t>();
    else if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      sc.seed = static_cast<std::uint64_t>(v.get<std::int64_t>());
    else
      fail(path + ".seed", "expected a nonnegative integer");
  }
  return sc;
}

SweepParameter parse_sweep_parameter(const std::string& s, const std::string& path) {
  if (s == "noise_mean") return SweepParameter::NoiseMean;
  if (s == "distance") return SweepParameter::Distance;
  if (s == "message_size") return SweepParameter::MessageSize;
  if (s == "n_ranks") return SweepParameter::NRanks;
  fail(path, "expected one of 'noise_mean', 'distance', 'message_size', 'n_ranks'");
}

}  // namespace

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::NoiseMean: return "noise_mean";
    case SweepParameter::Distance: return "distance";
    case SweepParameter::MessageSize: return "message_size";
    case SweepParameter::NRanks: return "n_ranks";
  }
  return "noise_mean";
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
  }
  check_keys(doc, "$", {"scenario", "analysis", "output", "sweep", "preset"});
  if (!doc.contains("scenario")) fail("$.scenario", "required");

  ExperimentConfig cfg;
  cfg.scenario = parse_scenario(doc.at("scenario"), "$.scenario");

  if (doc.contains("analysis")) {
    const auto& an = doc.at("analysis");
    check_keys(an, "$.analysis", {"theta", "window_steps"});
    cfg.analysis.theta = get_number(an, "$.analysis", "theta", 0.05);
    cfg.analysis.window_steps = static_cast<int>(get_integer(an, "$.analysis", "window_steps", 3));
    if (!(cfg.analysis.theta > 0.0 && cfg.analysis.theta < 1.0))
      fail("$.analysis.theta", "must be in (0, 1)");
    if (cfg.analysis.window_steps < 1) fail("$.analysis.window_steps", "must be >= 1");
  }
  if (doc.contains("output")) {
    const auto& out = doc.at("output");
    check_keys(out, "$.output", {"dir"});
    cfg.output_dir = get_string(out, "$.output", "dir", "out");
  }
  if (doc.contains("sweep")) {
    const auto& sw = doc.at("sweep");
    check_keys(sw, "$.sweep", {"parameter", "values", "repetitions"});
    SweepSettings s;
    s.parameter = parse_sweep_parameter(get_string(sw, "$.sweep", "parameter"), "$.sweep.parameter");
    if (!sw.contains("values") || !sw.at("values").is_array() || sw.at("values").empty())
      fail("$.sweep.values", "expected a non-empty array of numbers");
    for (const auto& v : sw.at("values")) {
      if (!v.is_number()) fail("$.sweep.values", "expected numbers");
      s.values.push_back(v.get<double>());
    }
    s.repetitions = static_cast<int>(get_integer(sw, "$.sweep", "repetitions", 1));
    if (s.repetitions < 1) fail("$.sweep.repetitions", "must be >= 1");
    cfg.sweep = s;
  }
  if (doc.contains("preset") && !doc.at("preset").is_null())
    cfg.preset_name = get_string(doc, "$", "preset");

  try {
    validate_scenario(cfg.scenario);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("config: $.") + e.what());
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  ordered_json doc;
  if (cfg.preset_name) doc["preset"] = *cfg.preset_name;

  ordered_json sc;
  sc["n_ranks"] = cfg.scenario.n_ranks;
  sc["n_steps"] = cfg.scenario.n_steps;
  sc["t_exec_us"] = cfg.scenario.t_exec_us;
  sc["topology"] = {{"direction", to_string(cfg.scenario.topology.direction)},
                    {"boundary", to_string(cfg.scenario.topology.boundary)},
                    {"distance", cfg.scenario.topology.distance_d}};
  ordered_json proto;
  proto["message_size_bytes"] = cfg.scenario.protocol_cfg.message_size_bytes;
  proto["eager_limit_bytes"] = cfg.scenario.protocol_cfg.eager_limit_bytes;
  proto["override"] = to_string(cfg.scenario.protocol_cfg.override_mode);
  if (cfg.scenario.protocol_cfg.eager_buffer_limit)
    proto["eager_buffer_limit"] = *cfg.scenario.protocol_cfg.eager_buffer_limit;
  sc["protocol"] = proto;
  sc["cost_model"] = {{"latency_us", cfg.scenario.cost_model.latency_us},
                      {"bandwidth_bytes_per_us", cfg.scenario.cost_model.bandwidth_bytes_per_us}};
  sc["noise"] = {{"enabled", cfg.scenario.noise.enabled},
                 {"mean_relative_delay", cfg.scenario.noise.mean_relative_delay}};
  ordered_json delays = ordered_json::array();
  for (const auto& d : cfg.scenario.delays)
    delays.push_back({{"rank", d.rank}, {"step", d.step}, {"duration_us", d.duration_us}});
  sc["delays"] = delays;
  sc["seed"] = cfg.scenario.seed;
  doc["scenario"] = sc;

  doc["analysis"] = {{"theta", cfg.analysis.theta}, {"window_steps", cfg.analysis.window_steps}};
  doc["output"] = {{"dir", cfg.output_dir}};
  if (cfg.sweep) {
    ordered_json sw;
    sw["parameter"] = to_string(cfg.sweep->parameter);
    sw["values"] = cfg.sweep->values;
    sw["repetitions"] = cfg.sweep->repetitions;
    doc["sweep"] = sw;
  }
  return doc.dump(2);
}

namespace {

ExperimentConfig standard_config(int n_ranks, int n_steps, Direction dir, Boundary bnd,
                                 std::int64_t message_size) {
  ExperimentConfig cfg;
  cfg.scenario.n_ranks = n_ranks;
  cfg.scenario.n_steps = n_steps;
  cfg.scenario.t_exec_us = 3000.0;
  cfg.scenario.topology = {dir, bnd, 1};
  cfg.scenario.protocol_cfg.message_size_bytes = message_size;
  cfg.scenario.protocol_cfg.eager_limit_bytes = 16384;
  cfg.scenario.cost_model = {1.0, 3000.0};
  return cfg;
}

// 4.5 execution phases of 3 ms.
constexpr double kStandardDelayUs = 13500.0;

}  // namespace

ExperimentConfig preset(const std::string& name) {
  const auto uni = Direction::Unidirectional;
  const auto bi = Direction::Bidirectional;
  const auto open = Boundary::Open;
  const auto ring = Boundary::Periodic;
  constexpr std::int64_t small_msg = 16384;  // at the eager limit
  constexpr std::int64_t large_msg = 31080;  // rendezvous

  ExperimentConfig cfg;
  if (name == "fig2") {
    cfg = standard_config(18, 25, uni, open, 8192);
    cfg.scenario.delays.push_back({5, 1, kStandardDelayUs});
  } else if (name == "fig3a" || name == "fig3b" || name == "fig3c" || name == "fig3d") {
    const Direction dir = (name == "fig3a" || name == "fig3b") ? uni : bi;
    const Boundary bnd = (name == "fig3a" || name == "fig3c") ? open : ring;
    cfg = standard_config(18, 25, dir, bnd, small_msg);
    cfg.scenario.delays.push_back({5, 1, kStandardDelayUs});
  } else if (name == "fig3e" || name == "fig3f" || name == "fig3g" || name == "fig3h") {
    const Direction dir = (name == "fig3e" || name == "fig3f") ? uni : bi;
    const Boundary bnd = (name == "fig3e" || name == "fig3g") ? open : ring;
    cfg = standard_config(18, 25, dir, bnd, large_msg);
    cfg.scenario.delays.push_back({5, 1, kStandardDelayUs});
  } else if (name == "fig4a" || name == "fig4b" || name == "fig4c") {
    // 10 sockets of 10 ranks; one injection on local rank 5 of each socket.
    cfg = standard_config(100, 20, bi, ring, small_msg);
    if (name == "fig4c") {
      // Random injection lengths, pinned by a fixed draw for reproducibility.
      Xoshiro256StarStar lengths(4242);
      for (int s = 0; s < 10; ++s) {
        const double dur = 1500.0 + lengths.next_uniform_open_closed() * 12000.0;
        cfg.scenario.delays.push_back({10 * s + 5, 1, dur});
      }
    } else {
      for (int s = 0; s < 10; ++s) {
        const bool half = name == "fig4b" && s % 2 == 1;
        cfg.scenario.delays.push_back(
            {10 * s + 5, 1, half ? kStandardDelayUs / 2.0 : kStandardDelayUs});
      }
    }
  } else if (name == "fig7a" || name == "fig7b") {
    cfg = standard_config(18, 25, name == "fig7a" ? uni : bi, open, large_msg);
    cfg.scenario.topology.distance_d = 2;
    cfg.scenario.delays.push_back({5, 1, kStandardDelayUs});
  } else if (name == "fig8a" || name == "fig8b" || name == "fig8c") {
    // Idle elimination study: 36 ranks, 30 steps, a 6 ms delay at rank 1,
    // and rising noise levels. The phase length is chosen so that the
    // trailing-edge erosion can fully absorb the delay within the run.
    cfg = standard_config(36, 30, bi, ring, 8192);
    cfg.scenario.t_exec_us = 6000.0;
    cfg.scenario.delays.push_back({1, 1, 6000.0});
    if (name == "fig8b") cfg.scenario.noise = {0.20, true};
    if (name == "fig8c") cfg.scenario.noise = {0.25, true};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  cfg.preset_name = name;
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"fig2",  "fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f", "fig3g", "fig3h",
          "fig4a", "fig4b", "fig4c", "fig7a", "fig7b", "fig8a", "fig8b", "fig8c"};
}

}  // namespace idlewave
