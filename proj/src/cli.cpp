#include "bucb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>

#include <json.hpp>

#include "bucb/env.hpp"

namespace bucb {

using nlohmann::json;

namespace {

template <typename T>
T field_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key \"" + key + "\" is missing or has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  return field_as<T>(j, key);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "num_arms",      "num_users",
      "budget_grid",   "policies",
      "cost_regime",   "qoe_range",
      "noise_sigma",   "base_seed",
      "replications",  "redraw_arms_per_replication",
      "epsilon_rank_by_cost_ratio", "threads",
      "output_dir",    "verbose",
      "arms",
  };
  return keys;
}

}  // namespace

CliConfig load_cli_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file is not valid JSON: " +
                      std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  for (const auto& item : j.items()) {
    if (known_keys().count(item.key()) == 0) {
      throw ConfigError("unknown config key \"" + item.key() + "\"");
    }
  }

  CliConfig cfg;
  auto& plan = cfg.plan;

  plan.budget_grid = field_as<std::vector<double>>(j, "budget_grid");
  plan.num_users = field_or<int>(j, "num_users", 1);
  plan.noise_sigma = field_or<double>(j, "noise_sigma", 0.1);
  plan.base_seed = field_or<std::uint64_t>(j, "base_seed", 0);
  plan.replications = field_or<int>(j, "replications", 50);
  plan.redraw_arms_per_replication =
      field_or<bool>(j, "redraw_arms_per_replication", false);
  plan.threads = field_or<int>(j, "threads", 1);
  cfg.output_dir = field_or<std::string>(j, "output_dir", "out");
  cfg.verbosity = field_or<int>(j, "verbose", 0);

  try {
    plan.cost_regime =
        parse_cost_regime(field_or<std::string>(j, "cost_regime", "medium"));
  } catch (const Error& e) {
    throw ConfigError(std::string("config key \"cost_regime\": ") + e.what());
  }

  if (j.contains("qoe_range")) {
    const auto range = field_as<std::vector<double>>(j, "qoe_range");
    if (range.size() != 2 || !(range[0] <= range[1])) {
      throw ConfigError("config key \"qoe_range\" must be [low, high]");
    }
    plan.qoe_range = {range[0], range[1]};
  }

  const bool rank_by_ratio =
      field_or<bool>(j, "epsilon_rank_by_cost_ratio", true);
  const auto names = field_as<std::vector<std::string>>(j, "policies");
  if (names.empty()) throw ConfigError("config key \"policies\" is empty");
  for (const auto& name : names) {
    try {
      auto kind = PolicyKind::parse(name);
      kind.rank_by_cost_ratio = rank_by_ratio;
      plan.policies.push_back(kind);
    } catch (const Error& e) {
      throw ConfigError(std::string("config key \"policies\": ") + e.what());
    }
  }

  if (j.contains("arms")) {
    const auto& arr = j.at("arms");
    if (!arr.is_array() || arr.empty()) {
      throw ConfigError("config key \"arms\" must be a nonempty array");
    }
    for (const auto& a : arr) {
      ArmSpec spec;
      spec.id = field_as<int>(a, "id");
      spec.expected_qoe = field_as<double>(a, "expected_qoe");
      spec.unit_cost = field_as<double>(a, "unit_cost");
      spec.noise_sigma = field_or<double>(a, "noise_sigma", plan.noise_sigma);
      plan.explicit_arms.push_back(spec);
    }
    plan.num_arms = static_cast<int>(plan.explicit_arms.size());
    if (j.contains("num_arms") &&
        field_as<int>(j, "num_arms") != plan.num_arms) {
      throw ConfigError(
          "config key \"num_arms\" contradicts the explicit \"arms\" list");
    }
  } else {
    plan.num_arms = field_as<int>(j, "num_arms");
  }
  return cfg;
}

void apply_env_overrides(CliConfig& cfg) {
  if (const char* seed = std::getenv("BUCB_SEED")) {
    try {
      std::size_t used = 0;
      cfg.plan.base_seed = std::stoull(seed, &used);
      if (used != std::string(seed).size()) throw std::invalid_argument(seed);
    } catch (const std::exception&) {
      throw ConfigError("BUCB_SEED must be an unsigned integer, got \"" +
                        std::string(seed) + "\"");
    }
  }
  if (const char* out = std::getenv("BUCB_OUT")) {
    if (*out == '\0') throw ConfigError("BUCB_OUT is empty");
    cfg.output_dir = out;
  }
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

// Empty cell for missing values, keeping the CSV schema rectangular.
std::string csv_cell(double x) {
  return std::isnan(x) ? std::string() : format_double(x);
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw Error("IoError", "cannot write " + path.string());
  return out;
}

void write_results_csv(const std::filesystem::path& dir,
                       const PlanResult& result) {
  auto out = open_csv(dir / "results.csv");
  out << "policy,budget,replication,utility,rounds,remaining,regret\n";
  for (const auto& r : result.rows) {
    out << r.policy << ',' << format_double(r.budget) << ',' << r.replication
        << ',' << format_double(r.utility) << ',' << r.rounds << ','
        << format_double(r.remaining) << ',' << format_double(r.regret)
        << '\n';
  }
}

void write_aggregate_csv(const std::filesystem::path& dir,
                         const PlanResult& result) {
  auto out = open_csv(dir / "aggregate.csv");
  out << "policy,budget,replications,degenerate,utility_mean,utility_se,"
         "regret_paired_mean,regret_paired_se,regret_unpaired_mean,"
         "regret_unpaired_se,regret_proxy_mean,rounds_mean,rounds_se\n";
  for (const auto& c : result.cells) {
    out << c.policy << ',' << format_double(c.budget) << ',' << c.replications
        << ',' << (c.degenerate ? 1 : 0) << ','
        << format_double(c.utility_mean) << ',' << format_double(c.utility_se)
        << ',' << format_double(c.regret_paired_mean) << ','
        << format_double(c.regret_paired_se) << ','
        << format_double(c.regret_unpaired_mean) << ','
        << format_double(c.regret_unpaired_se) << ','
        << format_double(c.regret_proxy_mean) << ','
        << format_double(c.rounds_mean) << ',' << format_double(c.rounds_se)
        << '\n';
  }
}

void write_arms_csv(const std::filesystem::path& dir,
                    const PlanResult& result) {
  auto out = open_csv(dir / "arms.csv");
  out << "arm,expected_qoe,noise_sigma,unit_cost,true_mean,optimal,cost_gap,"
         "ratio_gap,min_ratio_gap\n";
  for (std::size_t i = 0; i < result.arms.size(); ++i) {
    const auto& a = result.arms[i];
    out << a.id << ',' << format_double(a.expected_qoe) << ','
        << format_double(a.noise_sigma) << ',' << format_double(a.unit_cost)
        << ',' << format_double(result.true_means[i]) << ','
        << (static_cast<int>(i) == result.gaps.optimal_arm ? 1 : 0) << ','
        << format_double(result.gaps.cost_gap[i]) << ','
        << format_double(result.gaps.ratio_gap[i]) << ','
        << format_double(result.gaps.min_ratio_gap) << '\n';
  }
}

void write_bounds_rows(std::ofstream& out, double budget,
                       const std::vector<ArmSpec>& arms,
                       const BoundReport* report) {
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < arms.size(); ++i) {
    out << format_double(budget) << ',' << arms[i].id << ",pulls,"
        << csv_cell(report ? report->pull_bound[i] : nan) << ','
        << csv_cell(report ? report->empirical_pulls[i] : nan) << ','
        << csv_cell(report ? report->empirical_pulls_se[i] : nan) << '\n';
  }
  out << format_double(budget) << ",,rounds,"
      << csv_cell(report ? report->rounds_lower : nan) << ','
      << csv_cell(report ? report->empirical_rounds : nan) << ','
      << csv_cell(report ? report->empirical_rounds_se : nan) << '\n';
  out << format_double(budget) << ",,regret,"
      << csv_cell(report ? report->regret_upper : nan) << ','
      << csv_cell(report ? report->empirical_regret : nan) << ','
      << csv_cell(report ? report->empirical_regret_se : nan) << '\n';
}

void write_bounds_csv(const std::filesystem::path& dir, const CliConfig& cfg,
                      const PlanResult& result) {
  auto out = open_csv(dir / "bounds.csv");
  out << "budget,arm,metric,bound,empirical,stderr\n";
  if (cfg.plan.redraw_arms_per_replication) return;  // no fixed instance
  const bool has_bucb =
      std::any_of(cfg.plan.policies.begin(), cfg.plan.policies.end(),
                  [](const PolicyKind& k) {
                    return k.family == PolicyFamily::BudgetedUcb;
                  });
  for (double budget : cfg.plan.budget_grid) {
    try {
      const auto report =
          has_bucb ? bound_report(cfg.plan, budget, result)
                   : bound_report(cfg.plan, budget, result.arms);
      write_bounds_rows(out, budget, result.arms, &report);
    } catch (const ZeroGap&) {
      write_bounds_rows(out, budget, result.arms, nullptr);
    }
  }
}

void write_logfit_csv(const std::filesystem::path& dir, const CliConfig& cfg,
                      const PlanResult& result) {
  auto out = open_csv(dir / "logfit.csv");
  out << "policy,coefficient,r_squared,points\n";
  const auto& grid = cfg.plan.budget_grid;
  const bool fittable =
      grid.size() >= 3 &&
      std::all_of(grid.begin(), grid.end(), [](double b) { return b > 1.0; });
  if (!fittable) return;
  for (const auto& kind : cfg.plan.policies) {
    const auto name = kind.name();
    std::vector<std::pair<double, double>> points;
    for (const auto& c : result.cells) {
      if (c.policy == name) points.emplace_back(c.budget, c.regret_paired_mean);
    }
    const auto fit = fit_log_coefficient(points);
    out << name << ',' << format_double(fit.coefficient) << ','
        << format_double(fit.r_squared) << ',' << points.size() << '\n';
  }
}

}  // namespace

void write_outputs(const CliConfig& cfg, const PlanResult& result) {
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  write_results_csv(dir, result);
  write_aggregate_csv(dir, result);
  write_arms_csv(dir, result);
  write_bounds_csv(dir, cfg, result);
  write_logfit_csv(dir, cfg, result);
  if (cfg.verbosity > 0) {
    std::cerr << "wrote " << result.rows.size() << " result rows and "
              << result.cells.size() << " aggregate cells to " << dir.string()
              << "\n";
  }
}

namespace {

// Configuration-class failures exit 1; anything else is a runtime failure.
bool is_config_class(const Error& e) {
  const auto& k = e.kind();
  return k == "ConfigError" || k == "BudgetTooSmall" ||
         k == "DegenerateInput" || k == "QoeOutOfRange" ||
         k == "NonPositiveCost";
}

}  // namespace

int cmd_run(const std::string& config_path, const RunOverrides& overrides) {
  try {
    CliConfig cfg = load_cli_config(config_path);
    apply_env_overrides(cfg);
    if (overrides.out) cfg.output_dir = *overrides.out;
    if (overrides.seed) cfg.plan.base_seed = *overrides.seed;
    if (overrides.replications) cfg.plan.replications = *overrides.replications;
    const auto result = run_plan(cfg.plan);
    write_outputs(cfg, result);
    return 0;
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    return is_config_class(e) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_bounds(const std::string& config_path) {
  try {
    CliConfig cfg = load_cli_config(config_path);
    apply_env_overrides(cfg);
    const auto arms = realize_arms(cfg.plan, cfg.plan.base_seed, 0);

    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    auto out = open_csv(dir / "bounds.csv");
    out << "budget,arm,metric,bound,empirical,stderr\n";
    for (double budget : cfg.plan.budget_grid) {
      const auto report = bound_report(cfg.plan, budget, arms);
      write_bounds_rows(out, budget, arms, &report);
      std::cout << "budget " << format_double(budget)
                << ": rounds >= " << format_double(report.rounds_lower)
                << ", regret <= " << format_double(report.regret_upper)
                << "\n";
      for (std::size_t i = 0; i < arms.size(); ++i) {
        if (std::isnan(report.pull_bound[i])) {
          std::cout << "  arm " << arms[i].id << ": optimal\n";
        } else {
          std::cout << "  arm " << arms[i].id
                    << ": pulls <= " << format_double(report.pull_bound[i])
                    << "\n";
        }
      }
    }
    return 0;
  } catch (const ZeroGap& e) {
    std::cerr << "ZeroGap: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.kind() << ": " << e.what() << "\n";
    return is_config_class(e) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bucb
