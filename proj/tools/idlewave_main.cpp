// Command-line front end: single scenarios, the preset catalog, parameter
// sweeps, re-analysis of existing traces, and the analytic scaling model.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "idlewave/config.hpp"
#include "idlewave/experiment.hpp"
#include "idlewave/perf_model.hpp"
#include "idlewave/trace_io.hpp"

namespace {

using namespace idlewave;

struct CommonOpts {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> theta;
  std::optional<int> window;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "Override the scenario seed");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--theta", opts.theta, "Front threshold fraction (0,1)");
  cmd->add_option("--window", opts.window, "Amplitude window in steps");
}

void apply_common(ExperimentConfig& cfg, const CommonOpts& opts) {
  if (opts.seed) cfg.scenario.seed = *opts.seed;
  if (opts.out_dir) cfg.output_dir = *opts.out_dir;
  if (opts.theta) cfg.analysis.theta = *opts.theta;
  if (opts.window) cfg.analysis.window_steps = *opts.window;
}

int run_single(ExperimentConfig cfg, const CommonOpts& opts) {
  apply_common(cfg, opts);
  if (cfg.sweep)
    throw std::invalid_argument("config contains a sweep section; use the sweep subcommand");
  const ExperimentResult result = run_experiment(cfg);
  write_experiment_artifacts(cfg.output_dir, result);
  std::printf("wrote %s/trace.csv and %s/summary.json\n", cfg.output_dir.c_str(),
              cfg.output_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Idle-wave simulator and analysis toolkit for bulk-synchronous "
               "message-passing programs"};
  app.require_subcommand(1);

  std::string config_path, preset_name, trace_path;
  CommonOpts run_opts, preset_opts, analyze_opts, sweep_opts;

  auto* run = app.add_subcommand("run", "Simulate a scenario from a config file");
  run->add_option("--config", config_path, "Config JSON path")->required();
  add_common(run, run_opts);

  auto* scenario = app.add_subcommand("scenario", "Simulate a built-in preset");
  scenario->add_option("--preset", preset_name, "Preset name (see --list)");
  bool list_presets = false;
  scenario->add_flag("--list", list_presets, "List preset names");
  add_common(scenario, preset_opts);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a config file");
  sweep->add_option("--config", config_path, "Config JSON path with a sweep section")->required();
  add_common(sweep, sweep_opts);

  auto* analyze = app.add_subcommand("analyze", "Re-analyze an existing trace CSV");
  analyze->add_option("--trace", trace_path, "Trace CSV path")->required();
  analyze->add_option("--config", config_path, "Config JSON the trace was produced from")
      ->required();
  add_common(analyze, analyze_opts);

  auto* model = app.add_subcommand("model", "Analytic strong-scaling model table");
  int min_sockets = 1, max_sockets = 9;
  TriadModelParams params;
  bool no_write_allocate = false;
  model->add_option("--min-sockets", min_sockets, "First socket count");
  model->add_option("--max-sockets", max_sockets, "Last socket count");
  model->add_option("--v-mem", params.v_mem_bytes, "Working set in bytes");
  model->add_option("--b-mem", params.b_mem_bytes_per_s, "Per-socket memory bandwidth B/s");
  model->add_option("--v-net", params.v_net_bytes, "Per-neighbor message volume in bytes");
  model->add_option("--b-net", params.b_net_bytes_per_s, "Network bandwidth B/s");
  model->add_option("--flops", params.flops_total, "Flops per traversal");
  model->add_flag("--no-write-allocate", no_write_allocate,
                  "Disable the write-allocate traffic correction (factor 1)");
  std::optional<std::string> model_out;
  model->add_option("--out", model_out, "Write the table to a file instead of stdout");

  try {
    app.parse(argc, argv);

    if (run->parsed())
      return run_single(parse_config(read_text(config_path)), run_opts);

    if (scenario->parsed()) {
      if (list_presets) {
        for (const auto& name : preset_names()) std::printf("%s\n", name.c_str());
        return 0;
      }
      if (preset_name.empty())
        throw std::invalid_argument("scenario: --preset NAME or --list required");
      return run_single(preset(preset_name), preset_opts);
    }

    if (sweep->parsed()) {
      ExperimentConfig cfg = parse_config(read_text(config_path));
      apply_common(cfg, sweep_opts);
      const auto rows = run_sweep(cfg);
      const std::string csv = sweep_to_csv(cfg, rows);
      write_text_atomic(cfg.output_dir + "/sweep.csv", csv);
      write_text_atomic(cfg.output_dir + "/sweep_config.json", serialize_config(cfg) + "\n");
      std::printf("wrote %s/sweep.csv (%zu rows)\n", cfg.output_dir.c_str(), rows.size());
      return 0;
    }

    if (analyze->parsed()) {
      ExperimentConfig cfg = parse_config(read_text(config_path));
      apply_common(cfg, analyze_opts);
      const Trace trace = trace_from_csv(read_text(trace_path));
      if (static_cast<int>(trace.final_time_us.size()) > cfg.scenario.n_ranks)
        throw std::invalid_argument("analyze: trace has more ranks than the config");
      const auto summary = analyze_trace(cfg, trace);
      write_text_atomic(cfg.output_dir + "/summary.json", summary.dump(2) + "\n");
      std::printf("wrote %s/summary.json\n", cfg.output_dir.c_str());
      return 0;
    }

    if (model->parsed()) {
      if (no_write_allocate) params.write_allocate_factor = 1.0;
      if (min_sockets < 1 || max_sockets < min_sockets)
        throw std::invalid_argument("model: socket range must satisfy 1 <= min <= max");
      std::string table =
          "n_sockets,runtime_s,performance_flops,exec_runtime_s,exec_performance_flops\n";
      char line[160];
      for (int n = min_sockets; n <= max_sockets; ++n) {
        std::snprintf(line, sizeof line, "%d,%.9g,%.9g,%.9g,%.9g\n", n, triad_runtime(n, params),
                      triad_performance(n, params), triad_exec_runtime(n, params),
                      triad_exec_performance(n, params));
        table += line;
      }
      if (model_out)
        write_text_atomic(*model_out, table);
      else
        std::fputs(table.c_str(), stdout);
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
