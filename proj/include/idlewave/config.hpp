#ifndef IDLEWAVE_CONFIG_HPP
#define IDLEWAVE_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "idlewave/scenario.hpp"

namespace idlewave {

struct AnalysisSettings {
  double theta = 0.05;   // front threshold as a fraction of t_exec
  int window_steps = 3;  // amplitude window after front arrival

  bool operator==(const AnalysisSettings&) const = default;
};

enum class SweepParameter { NoiseMean, Distance, MessageSize, NRanks };

const char* to_string(SweepParameter p);

struct SweepSettings {
  SweepParameter parameter = SweepParameter::NoiseMean;
  std::vector<double> values;
  int repetitions = 1;  // seeds per value: base seed, base+1, ...

  bool operator==(const SweepSettings&) const = default;
};

/// A full experiment description: the scenario, analysis knobs, output
/// location, and (for the sweep runner) the swept parameter.
struct ExperimentConfig {
  Scenario scenario;
  AnalysisSettings analysis;
  std::string output_dir = "out";
  std::optional<SweepSettings> sweep;
  std::optional<std::string> preset_name;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parse a JSON config document. Unknown keys are rejected with their path;
/// semantic violations name the offending field. All defaults are applied.
ExperimentConfig parse_config(const std::string& text);

/// Canonical JSON with every effective value spelled out;
/// parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Built-in scenario catalog mirroring the reference experiments
/// (fig2, fig3a..fig3h, fig4a/b/c, fig7a/b, fig8a/b/c).
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace idlewave

#endif
