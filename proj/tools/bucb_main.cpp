#include <CLI11.hpp>

#include "bucb/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"budget-constrained bandit experiment harness"};
  app.require_subcommand(1);

  std::string config_path;
  bucb::RunOverrides overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  int replications = 0;

  auto* run = app.add_subcommand("run", "run a sweep and write CSV outputs");
  run->add_option("--config", config_path, "JSON config file")->required();
  auto* out_opt = run->add_option("--out", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override base seed");
  auto* reps_opt =
      run->add_option("--replications", replications, "override replications");

  auto* bounds =
      app.add_subcommand("bounds", "print bound report without episodes");
  bounds->add_option("--config", config_path, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are configuration errors
  }

  if (run->parsed()) {
    if (out_opt->count() > 0) overrides.out = out_dir;
    if (seed_opt->count() > 0) overrides.seed = seed;
    if (reps_opt->count() > 0) overrides.replications = replications;
    return bucb::cmd_run(config_path, overrides);
  }
  return bucb::cmd_bounds(config_path);
}
