#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bucb/runner.hpp"

using namespace bucb;

namespace {

ExperimentPlan small_plan() {
  ExperimentPlan plan;
  plan.explicit_arms = {{1, 1.5, 0.1, 1.0}, {2, 1.2, 0.1, 1.5}};
  plan.num_arms = 2;
  plan.num_users = 2;
  plan.budget_grid = {40.0, 80.0, 160.0};
  plan.policies = {PolicyKind::budgeted_ucb(), PolicyKind::oracle(),
                   PolicyKind::epsilon_greedy(0.05)};
  plan.base_seed = 11;
  plan.replications = 4;
  return plan;
}

bool rows_equal(const ReplicationRow& a, const ReplicationRow& b) {
  return a.policy == b.policy && a.budget == b.budget &&
         a.replication == b.replication && a.utility == b.utility &&
         a.rounds == b.rounds && a.remaining == b.remaining &&
         a.regret == b.regret;
}

bool cells_equal(const AggregateCell& a, const AggregateCell& b) {
  return a.policy == b.policy && a.budget == b.budget &&
         a.replications == b.replications && a.degenerate == b.degenerate &&
         a.utility_mean == b.utility_mean && a.utility_se == b.utility_se &&
         a.regret_paired_mean == b.regret_paired_mean &&
         a.regret_paired_se == b.regret_paired_se &&
         a.regret_unpaired_mean == b.regret_unpaired_mean &&
         a.regret_unpaired_se == b.regret_unpaired_se &&
         a.regret_proxy_mean == b.regret_proxy_mean &&
         a.rounds_mean == b.rounds_mean && a.rounds_se == b.rounds_se &&
         a.pulls_mean == b.pulls_mean && a.pulls_se == b.pulls_se;
}

bool results_equal(const PlanResult& a, const PlanResult& b) {
  if (a.rows.size() != b.rows.size() || a.cells.size() != b.cells.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (!rows_equal(a.rows[i], b.rows[i])) return false;
  }
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (!cells_equal(a.cells[i], b.cells[i])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cost regimes map to their draw intervals") {
  CHECK(cost_interval(CostRegime::Low) == std::pair{1.5, 2.0});
  CHECK(cost_interval(CostRegime::Medium) == std::pair{1.0, 2.0});
  CHECK(cost_interval(CostRegime::High) == std::pair{1.0, 3.0});
  CHECK(parse_cost_regime("low") == CostRegime::Low);
  CHECK(parse_cost_regime("medium") == CostRegime::Medium);
  CHECK(parse_cost_regime("high") == CostRegime::High);
  CHECK(to_string(CostRegime::High) == "high");
  CHECK_THROWS_AS(parse_cost_regime("extreme"), ConfigError);
}

TEST_CASE("realized arms are deterministic and sit in regime supports") {
  ExperimentPlan plan;
  plan.num_arms = 6;
  plan.cost_regime = CostRegime::Low;
  const auto a = realize_arms(plan, 77);
  const auto b = realize_arms(plan, 77);
  REQUIRE(a.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == static_cast<int>(i) + 1);
    CHECK(a[i].unit_cost == b[i].unit_cost);
    CHECK(a[i].expected_qoe == b[i].expected_qoe);
    CHECK(a[i].unit_cost >= 1.5);
    CHECK(a[i].unit_cost <= 2.0);
    CHECK(a[i].expected_qoe >= kQoeMin);
    CHECK(a[i].expected_qoe <= kQoeMax);
    CHECK(a[i].noise_sigma == 0.1);
  }
  CHECK(realize_arms(plan, 78)[0].unit_cost != a[0].unit_cost);
  CHECK(realize_arms(plan, 77, 1)[0].unit_cost != a[0].unit_cost);
}

TEST_CASE("cost draws are uniform over the medium interval") {
  ExperimentPlan plan;
  plan.num_arms = 100000;
  plan.cost_regime = CostRegime::Medium;
  const auto arms = realize_arms(plan, 3);
  double sum = 0.0;
  for (const auto& a : arms) sum += a.unit_cost;
  const double mean = sum / static_cast<double>(arms.size());
  const double se = (1.0 / std::sqrt(12.0)) / std::sqrt(100000.0);
  CHECK(std::abs(mean - 1.5) < 3.0 * se);
}

TEST_CASE("explicit arms bypass realization") {
  auto plan = small_plan();
  const auto arms = realize_arms(plan, 123);
  CHECK(arms == std::vector<ArmSpec>(plan.explicit_arms));
}

TEST_CASE("boundary budget yields exactly the initialization rounds") {
  auto plan = small_plan();
  // init sweep costs 2*1 + 2*1.5 = 5
  const auto trace = run_episode(PolicyKind::budgeted_ucb(),
                                 plan.explicit_arms, 2, 5.0, 1, 0);
  CHECK(trace.total_rounds() == 2);
  CHECK(trace.pull_counts == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("uniform costs make the round count a pure budget quotient") {
  // every round costs M*c: tau = B/(M*c) for every policy, exactly
  std::vector<ArmSpec> arms = {
      {1, 1.5, 0.1, 1.25}, {2, 1.2, 0.1, 1.25}, {3, 1.8, 0.1, 1.25}};
  const double budget = 2 * 3 * 1.25 + 20 * 1.25;  // dyadic: exact floats
  for (const auto* name : {"bucb", "oracle", "ep5", "epx", "etc20"}) {
    const auto trace = run_episode(PolicyKind::parse(name), arms, 2, budget,
                                   99, 0);
    CHECK(trace.total_rounds() == 13);  // N + 10
    CHECK(trace.remaining == 0.0);
  }
}

TEST_CASE("run_plan emits canonical rows and oracle self-regret zero") {
  const auto plan = small_plan();
  const auto result = run_plan(plan);
  REQUIRE(result.rows.size() == 3 * 3 * 4);  // policies x budgets x reps
  REQUIRE(result.cells.size() == 3 * 3);
  std::size_t r = 0;
  for (const auto& kind : plan.policies) {
    for (double budget : plan.budget_grid) {
      for (int rep = 0; rep < plan.replications; ++rep, ++r) {
        CHECK(result.rows[r].policy == kind.name());
        CHECK(result.rows[r].budget == budget);
        CHECK(result.rows[r].replication == rep);
        if (kind.family == PolicyFamily::Oracle) {
          CHECK(result.rows[r].regret == 0.0);
        }
      }
    }
  }
  for (const auto& cell : result.cells) {
    if (cell.policy == "oracle") {
      CHECK(cell.regret_paired_mean == 0.0);
      CHECK(cell.regret_paired_se == 0.0);
    }
    CHECK(cell.replications == 4);
    CHECK_FALSE(cell.degenerate);
    CHECK(cell.pulls_mean.size() == 2);
  }
}

TEST_CASE("single replication is flagged degenerate with zero stderr") {
  auto plan = small_plan();
  plan.replications = 1;
  const auto result = run_plan(plan);
  for (const auto& cell : result.cells) {
    CHECK(cell.degenerate);
    CHECK(cell.utility_se == 0.0);
    CHECK(cell.rounds_se == 0.0);
  }
}

TEST_CASE("run_plan is reproducible and thread-count invariant") {
  auto plan = small_plan();
  const auto serial = run_plan(plan);
  const auto again = run_plan(plan);
  CHECK(results_equal(serial, again));
  plan.threads = 3;
  const auto parallel = run_plan(plan);
  CHECK(results_equal(serial, parallel));
}

TEST_CASE("oracle utility is nondecreasing along the budget grid") {
  const auto result = run_plan(small_plan());
  double prev = -1.0;
  for (const auto& cell : result.cells) {
    if (cell.policy != "oracle") continue;
    CHECK(cell.utility_mean >= prev);
    prev = cell.utility_mean;
  }
}

TEST_CASE("paired and unpaired regret agree in mean under shared streams") {
  const auto result = run_plan(small_plan());
  for (const auto& cell : result.cells) {
    CHECK(cell.regret_paired_mean ==
          doctest::Approx(cell.regret_unpaired_mean).epsilon(1e-12));
    CHECK(cell.regret_paired_se <= cell.regret_unpaired_se + 1e-15);
  }
}

TEST_CASE("per-replication arm redraw varies the instance") {
  ExperimentPlan plan;
  plan.num_arms = 3;
  plan.num_users = 1;
  plan.budget_grid = {60.0};
  plan.policies = {PolicyKind::budgeted_ucb()};
  plan.base_seed = 5;
  plan.replications = 3;
  plan.redraw_arms_per_replication = true;
  const auto r0 = realize_arms(plan, plan.base_seed, 0);
  const auto r1 = realize_arms(plan, plan.base_seed, 1);
  CHECK(r0[0].unit_cost != r1[0].unit_cost);
  const auto result = run_plan(plan);  // still runs and aggregates
  CHECK(result.rows.size() == 3);
  CHECK(result.arms == r0);
}

TEST_CASE("infeasible smallest budget is rejected up front") {
  auto plan = small_plan();
  plan.budget_grid = {4.0, 80.0};  // init sweep needs 5
  CHECK_THROWS_AS(run_plan(plan), BudgetTooSmall);
  plan.budget_grid = {80.0, 80.0};
  CHECK_THROWS_AS(run_plan(plan), DegenerateInput);
  plan.budget_grid = {};
  CHECK_THROWS_AS(run_plan(plan), DegenerateInput);
  plan.budget_grid = {80.0};
  plan.policies.clear();
  CHECK_THROWS_AS(run_plan(plan), DegenerateInput);
}

TEST_CASE("bound report pairs bounds with bucb empirics") {
  auto plan = small_plan();
  const auto result = run_plan(plan);
  const auto report = bound_report(plan, 160.0, result);
  REQUIRE(report.pull_bound.size() == 2);
  // arm 1 is optimal here: log(1.5)/1 > log(1.2)/1.5
  CHECK(std::isnan(report.pull_bound[0]));
  CHECK(std::isfinite(report.pull_bound[1]));
  CHECK(std::isfinite(report.rounds_lower));
  CHECK(std::isfinite(report.regret_upper));
  const AggregateCell* cell = nullptr;
  for (const auto& c : result.cells) {
    if (c.policy == "bucb" && c.budget == 160.0) cell = &c;
  }
  REQUIRE(cell != nullptr);
  CHECK(report.empirical_pulls == cell->pulls_mean);
  CHECK(report.empirical_rounds == cell->rounds_mean);
  CHECK(report.empirical_regret == cell->regret_paired_mean);
}

TEST_CASE("episode-free bound report leaves empirics unset") {
  auto plan = small_plan();
  const auto arms = plan.explicit_arms;
  const auto report = bound_report(plan, 160.0, arms);
  CHECK(std::isfinite(report.rounds_lower));
  CHECK(std::isfinite(report.regret_upper));
  CHECK(std::isnan(report.empirical_rounds));
  CHECK(std::isnan(report.empirical_regret));
  for (std::size_t i = 1; i < arms.size(); ++i) {
    CHECK(std::isfinite(report.pull_bound[i]));
  }
}

TEST_CASE("bound report refuses duplicated best arms") {
  auto plan = small_plan();
  plan.explicit_arms = {{1, 1.5, 0.1, 1.0}, {2, 1.5, 0.1, 1.0}};
  const auto arms = plan.explicit_arms;
  CHECK_THROWS_AS(bound_report(plan, 160.0, arms), ZeroGap);
}
