#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bucb/analysis.hpp"
#include "bucb/core.hpp"
#include "bucb/policies.hpp"

namespace bucb {

// Cost draw intervals for realized instances.
enum class CostRegime { Low, Medium, High };

std::pair<double, double> cost_interval(CostRegime regime);
std::string to_string(CostRegime regime);
CostRegime parse_cost_regime(const std::string& name);  // ConfigError

// One sweep: a fixed instance shape (N arms, M users), a budget grid, a
// policy list, and R seeded replications. The same realized arm set serves
// every policy and every budget; replications vary only the feedback noise
// and the policies' private exploration draws, unless
// redraw_arms_per_replication asks for a fresh instance per replication.
struct ExperimentPlan {
  int num_arms = 2;
  int num_users = 1;
  std::vector<double> budget_grid;
  std::vector<PolicyKind> policies;
  CostRegime cost_regime = CostRegime::Medium;
  std::pair<double, double> qoe_range = {kQoeMin, kQoeMax};
  double noise_sigma = 0.1;
  std::uint64_t base_seed = 0;
  int replications = 50;
  bool redraw_arms_per_replication = false;
  int threads = 1;
  std::vector<ArmSpec> explicit_arms;  // bypasses realize_arms when nonempty
};

// N arms with unit_cost ~ U(cost interval) and expected_qoe ~ U(qoe_range),
// a pure function of (plan shape, seed, replication). Ids are 1..N.
std::vector<ArmSpec> realize_arms(const ExperimentPlan& plan,
                                  std::uint64_t seed,
                                  std::uint64_t replication = 0);

// One policy, one budget, one replication, to exhaustion.
EpisodeTrace run_episode(const PolicyKind& policy,
                         const std::vector<ArmSpec>& arms, int num_users,
                         double budget, std::uint64_t seed,
                         std::uint64_t replication);

// results.csv row: one policy on one budget in one replication.
struct ReplicationRow {
  std::string policy;
  double budget = 0.0;
  int replication = 0;
  double utility = 0.0;
  std::int64_t rounds = 0;
  double remaining = 0.0;
  double regret = 0.0;  // paired against the oracle on shared streams
};

// aggregate.csv row: one policy on one budget across replications.
struct AggregateCell {
  std::string policy;
  double budget = 0.0;
  int replications = 0;
  bool degenerate = false;  // R == 1: stderrs reported as 0
  double utility_mean = 0.0, utility_se = 0.0;
  double regret_paired_mean = 0.0, regret_paired_se = 0.0;
  double regret_unpaired_mean = 0.0, regret_unpaired_se = 0.0;
  double regret_proxy_mean = 0.0;
  double rounds_mean = 0.0, rounds_se = 0.0;
  std::vector<double> pulls_mean, pulls_se;  // per arm
};

struct PlanResult {
  std::vector<ArmSpec> arms;  // realized set (replication 0 when redrawing)
  std::vector<double> true_means;
  GapProfile gaps;
  std::vector<ReplicationRow> rows;    // policy-major, then budget, then rep
  std::vector<AggregateCell> cells;    // policy-major, then budget
};

// Runs the full sweep. (budget, replication) cells are independent tasks
// executed by plan.threads workers into preallocated slots; the reduce walks
// the slots in canonical order, so the output is identical for any thread
// count. The oracle is evaluated in every cell (for pairing) whether or not
// it is listed as a policy.
PlanResult run_plan(const ExperimentPlan& plan);

// Bound values vs empirical means for the budgeted-UCB policy on one budget.
// Empirical columns are taken from `result` (must come from the same plan);
// requires a fixed arm set (no per-replication redraw).
BoundReport bound_report(const ExperimentPlan& plan, double budget,
                         const PlanResult& result);

// Bounds only, no episodes: empirical fields NaN. The pull-count bound is
// evaluated at the round cap tau = B/(M c_min), the largest round count any
// policy can reach within the budget.
BoundReport bound_report(const ExperimentPlan& plan, double budget,
                         const std::vector<ArmSpec>& arms);

}  // namespace bucb
