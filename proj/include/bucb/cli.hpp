#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bucb/runner.hpp"

namespace bucb {

// ExperimentPlan plus where to put the CSVs and how chatty to be.
struct CliConfig {
  ExperimentPlan plan;
  std::string output_dir = "out";
  int verbosity = 0;
};

// Parses the JSON config file. Every diagnosable problem is reported as a
// ConfigError whose message names the offending key. Unknown keys are
// rejected. See README for the schema.
CliConfig load_cli_config(const std::string& path);

// Applies BUCB_SEED / BUCB_OUT environment overrides to a loaded config.
void apply_env_overrides(CliConfig& cfg);

// 17 significant digits: parses back to the identical double.
std::string format_double(double x);

// Flag-level overrides (applied after env overrides).
struct RunOverrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> replications;
};

// Writes results.csv, aggregate.csv, arms.csv, bounds.csv and logfit.csv
// into cfg.output_dir.
void write_outputs(const CliConfig& cfg, const PlanResult& result);

// Exit codes: 0 ok; 1 configuration error (bad file, key, value, or an
// infeasible plan); 2 runtime failure.
int cmd_run(const std::string& config_path, const RunOverrides& overrides = {});

// Bound report for the realized arm set, without running episodes: prints a
// table and writes bounds.csv (empirical columns empty). Exit 1 when the
// optimal arm is not unique (or on config errors), 2 on runtime failures.
int cmd_bounds(const std::string& config_path);

}  // namespace bucb
