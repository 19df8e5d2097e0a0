#include "bucb/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "bucb/env.hpp"
#include "bucb/rng.hpp"

namespace bucb {

std::pair<double, double> cost_interval(CostRegime regime) {
  switch (regime) {
    case CostRegime::Low:
      return {1.5, 2.0};
    case CostRegime::Medium:
      return {1.0, 2.0};
    case CostRegime::High:
      return {1.0, 3.0};
  }
  throw DomainError("unreachable cost regime");
}

std::string to_string(CostRegime regime) {
  switch (regime) {
    case CostRegime::Low:
      return "low";
    case CostRegime::Medium:
      return "medium";
    case CostRegime::High:
      return "high";
  }
  throw DomainError("unreachable cost regime");
}

CostRegime parse_cost_regime(const std::string& name) {
  if (name == "low") return CostRegime::Low;
  if (name == "medium") return CostRegime::Medium;
  if (name == "high") return CostRegime::High;
  throw ConfigError("cost_regime must be low, medium or high, got \"" + name +
                    "\"");
}

std::vector<ArmSpec> realize_arms(const ExperimentPlan& plan,
                                  std::uint64_t seed,
                                  std::uint64_t replication) {
  if (!plan.explicit_arms.empty()) return plan.explicit_arms;
  if (plan.num_arms < 1) throw DegenerateInput("plan needs at least one arm");
  if (!(plan.noise_sigma > 0.0)) {
    throw DegenerateInput("noise_sigma must be > 0");
  }
  const auto [c_lo, c_hi] = cost_interval(plan.cost_regime);
  const auto [q_lo, q_hi] = plan.qoe_range;
  if (!(q_lo >= kQoeMin && q_hi <= kQoeMax && q_lo <= q_hi)) {
    throw QoeOutOfRange("qoe_range must sit inside the QoE support");
  }
  std::vector<ArmSpec> arms;
  arms.reserve(static_cast<std::size_t>(plan.num_arms));
  for (int i = 0; i < plan.num_arms; ++i) {
    ArmSpec a;
    a.id = i + 1;
    a.unit_cost =
        c_lo + arm_realization_uniform(seed, replication, a.id, 1) *
                   (c_hi - c_lo);
    a.expected_qoe =
        q_lo + arm_realization_uniform(seed, replication, a.id, 2) *
                   (q_hi - q_lo);
    a.noise_sigma = plan.noise_sigma;
    arms.push_back(a);
  }
  return arms;
}

EpisodeTrace run_episode(const PolicyKind& policy,
                         const std::vector<ArmSpec>& arms, int num_users,
                         double budget, std::uint64_t seed,
                         std::uint64_t replication) {
  Episode ep(policy, arms, num_users, budget, UtilityFunction{},
             FeedbackStream{seed, replication});
  return ep.run();
}

namespace {

struct PolicySample {
  double utility = 0.0;
  std::int64_t rounds = 0;
  double remaining = 0.0;
  std::vector<std::int64_t> pulls;
};

struct CellSample {
  double oracle_utility = 0.0;
  double proxy = 0.0;
  std::vector<PolicySample> per_policy;
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  const auto n = xs.size();
  if (n == 0) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(n);
  if (n < 2) return out;  // degenerate sample: se stays 0
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(n - 1)) /
           std::sqrt(static_cast<double>(n));
  return out;
}

PolicySample summarize(const EpisodeTrace& trace) {
  PolicySample s;
  s.utility = trace.cumulative_utility;
  s.rounds = trace.total_rounds();
  s.remaining = trace.remaining;
  s.pulls = trace.pull_counts;
  return s;
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.policies.empty()) throw DegenerateInput("plan lists no policies");
  if (plan.budget_grid.empty()) throw DegenerateInput("empty budget grid");
  for (std::size_t k = 1; k < plan.budget_grid.size(); ++k) {
    if (!(plan.budget_grid[k] > plan.budget_grid[k - 1])) {
      throw DegenerateInput("budget_grid must be strictly increasing");
    }
  }
  if (plan.replications < 1) {
    throw DegenerateInput("replications must be >= 1");
  }
  if (plan.num_users < 1) throw DegenerateInput("num_users must be >= 1");
}

}  // namespace

PlanResult run_plan(const ExperimentPlan& plan) {
  validate_plan(plan);

  const auto base_arms = realize_arms(plan, plan.base_seed, 0);
  const int n_arms = static_cast<int>(base_arms.size());
  const int n_reps = plan.replications;
  const auto n_budgets = plan.budget_grid.size();
  const auto n_policies = plan.policies.size();

  // Fail fast on budgets the initialization sweep cannot fit, for every arm
  // set the plan will realize.
  const int check_reps = plan.redraw_arms_per_replication ? n_reps : 1;
  for (int rep = 0; rep < check_reps; ++rep) {
    const auto arms = rep == 0 ? base_arms
                               : realize_arms(plan, plan.base_seed,
                                              static_cast<std::uint64_t>(rep));
    const double init_cost = total_init_cost(arms, plan.num_users);
    if (plan.budget_grid.front() < init_cost) {
      throw BudgetTooSmall(
          "budget " + std::to_string(plan.budget_grid.front()) +
          " cannot cover one pull of every arm (needs " +
          std::to_string(init_cost) + ")");
    }
  }

  std::vector<double> base_means;
  for (const auto& a : base_arms) {
    base_means.push_back(make_arm_distribution(a).mean());
  }
  const auto base_gaps = compute_gaps(base_means, [&] {
    std::vector<double> c;
    for (const auto& a : base_arms) c.push_back(a.unit_cost);
    return c;
  }());

  // (budget, replication) task grid, filled into preallocated slots so the
  // result is independent of worker scheduling.
  const std::size_t n_tasks = n_budgets * static_cast<std::size_t>(n_reps);
  std::vector<CellSample> slots(n_tasks);

  std::atomic<std::size_t> next_task{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto worker = [&] {
    for (;;) {
      const std::size_t idx = next_task.fetch_add(1);
      if (idx >= n_tasks || failed.load()) return;
      try {
        const auto b_idx = idx / static_cast<std::size_t>(n_reps);
        const int rep = static_cast<int>(idx % static_cast<std::size_t>(n_reps));
        const double budget = plan.budget_grid[b_idx];
        const auto arms =
            plan.redraw_arms_per_replication
                ? realize_arms(plan, plan.base_seed,
                               static_cast<std::uint64_t>(rep))
                : base_arms;

        CellSample cell;
        cell.per_policy.resize(n_policies);
        const auto oracle_trace =
            run_episode(PolicyKind::oracle(), arms, plan.num_users, budget,
                        plan.base_seed, static_cast<std::uint64_t>(rep));
        cell.oracle_utility = oracle_trace.cumulative_utility;

        std::vector<double> means, costs;
        for (const auto& a : arms) {
          means.push_back(make_arm_distribution(a).mean());
          costs.push_back(a.unit_cost);
        }
        const auto gaps = compute_gaps(means, costs);
        const auto star = static_cast<std::size_t>(gaps.optimal_arm);
        cell.proxy = oracle_reward_proxy(budget, plan.num_users, costs[star],
                                         means[star]);

        for (std::size_t p = 0; p < n_policies; ++p) {
          if (plan.policies[p].family == PolicyFamily::Oracle) {
            cell.per_policy[p] = summarize(oracle_trace);
          } else {
            cell.per_policy[p] = summarize(
                run_episode(plan.policies[p], arms, plan.num_users, budget,
                            plan.base_seed, static_cast<std::uint64_t>(rep)));
          }
        }
        slots[idx] = std::move(cell);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::max(
      1, std::min<int>(plan.threads, static_cast<int>(n_tasks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) std::rethrow_exception(first_error);

  PlanResult out;
  out.arms = base_arms;
  out.true_means = base_means;
  out.gaps = base_gaps;

  for (std::size_t p = 0; p < n_policies; ++p) {
    const std::string pname = plan.policies[p].name();
    for (std::size_t b = 0; b < n_budgets; ++b) {
      std::vector<double> utilities, diffs, oracle_utils, proxy_diffs, rounds;
      std::vector<std::vector<double>> pulls(
          static_cast<std::size_t>(n_arms));
      for (int rep = 0; rep < n_reps; ++rep) {
        const auto& cell =
            slots[b * static_cast<std::size_t>(n_reps) +
                  static_cast<std::size_t>(rep)];
        const auto& s = cell.per_policy[p];
        ReplicationRow row;
        row.policy = pname;
        row.budget = plan.budget_grid[b];
        row.replication = rep;
        row.utility = s.utility;
        row.rounds = s.rounds;
        row.remaining = s.remaining;
        row.regret = cell.oracle_utility - s.utility;
        out.rows.push_back(row);

        utilities.push_back(s.utility);
        diffs.push_back(cell.oracle_utility - s.utility);
        oracle_utils.push_back(cell.oracle_utility);
        proxy_diffs.push_back(cell.proxy - s.utility);
        rounds.push_back(static_cast<double>(s.rounds));
        for (int a = 0; a < n_arms; ++a) {
          pulls[static_cast<std::size_t>(a)].push_back(
              static_cast<double>(s.pulls[static_cast<std::size_t>(a)]));
        }
      }
      AggregateCell cell;
      cell.policy = pname;
      cell.budget = plan.budget_grid[b];
      cell.replications = n_reps;
      cell.degenerate = n_reps < 2;
      const auto u = mean_se(utilities);
      cell.utility_mean = u.mean;
      cell.utility_se = u.se;
      const auto d = mean_se(diffs);
      cell.regret_paired_mean = d.mean;
      cell.regret_paired_se = d.se;
      const auto o = mean_se(oracle_utils);
      cell.regret_unpaired_mean = o.mean - u.mean;
      cell.regret_unpaired_se = std::sqrt(o.se * o.se + u.se * u.se);
      cell.regret_proxy_mean = mean_se(proxy_diffs).mean;
      const auto r = mean_se(rounds);
      cell.rounds_mean = r.mean;
      cell.rounds_se = r.se;
      for (int a = 0; a < n_arms; ++a) {
        const auto t = mean_se(pulls[static_cast<std::size_t>(a)]);
        cell.pulls_mean.push_back(t.mean);
        cell.pulls_se.push_back(t.se);
      }
      out.cells.push_back(std::move(cell));
    }
  }
  return out;
}

namespace {

BoundReport bounds_for(const std::vector<ArmSpec>& arms, int num_users,
                       double budget, double tau) {
  std::vector<double> means, costs;
  for (const auto& a : arms) {
    means.push_back(make_arm_distribution(a).mean());
    costs.push_back(a.unit_cost);
  }
  const auto gaps = compute_gaps(means, costs);
  BoundReport rep;
  rep.pull_bound.resize(arms.size());
  for (std::size_t i = 0; i < arms.size(); ++i) {
    rep.pull_bound[i] =
        static_cast<int>(i) == gaps.optimal_arm
            ? std::numeric_limits<double>::quiet_NaN()
            : pull_count_upper_bound(std::max(tau, 1.0), num_users, costs[i],
                                     gaps.ratio_gap[i]);
  }
  rep.rounds_lower = round_count_lower_bound(budget, num_users, costs, gaps);
  rep.regret_upper = regret_upper_bound(budget, num_users, costs, means, gaps);
  return rep;
}

}  // namespace

BoundReport bound_report(const ExperimentPlan& plan, double budget,
                         const PlanResult& result) {
  if (plan.redraw_arms_per_replication) {
    throw DegenerateInput("bounds need a fixed arm set across replications");
  }
  const AggregateCell* bucb_cell = nullptr;
  for (const auto& c : result.cells) {
    if (c.policy == "bucb" && c.budget == budget) {
      bucb_cell = &c;
      break;
    }
  }
  if (bucb_cell == nullptr) {
    throw DegenerateInput("plan has no budgeted-UCB cell at this budget");
  }
  auto rep = bounds_for(result.arms, plan.num_users, budget,
                        bucb_cell->rounds_mean);
  rep.empirical_pulls = bucb_cell->pulls_mean;
  rep.empirical_pulls_se = bucb_cell->pulls_se;
  rep.empirical_rounds = bucb_cell->rounds_mean;
  rep.empirical_rounds_se = bucb_cell->rounds_se;
  rep.empirical_regret = bucb_cell->regret_paired_mean;
  rep.empirical_regret_se = bucb_cell->regret_paired_se;
  return rep;
}

BoundReport bound_report(const ExperimentPlan& plan, double budget,
                         const std::vector<ArmSpec>& arms) {
  double c_min = min_unit_cost(arms);
  const double tau_cap = budget / (plan.num_users * c_min);
  auto rep = bounds_for(arms, plan.num_users, budget, tau_cap);
  const auto nan = std::numeric_limits<double>::quiet_NaN();
  rep.empirical_pulls.assign(arms.size(), nan);
  rep.empirical_pulls_se.assign(arms.size(), nan);
  rep.empirical_rounds = nan;
  rep.empirical_rounds_se = nan;
  rep.empirical_regret = nan;
  rep.empirical_regret_se = nan;
  return rep;
}

}  // namespace bucb
