#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bucb/core.hpp"
#include "bucb/policies.hpp"

namespace bucb {

// Structural gaps of a bandit instance. optimal_arm indexes the input
// arrays (0-based); cost_gap[i] = c_i - c_star; ratio_gap[i] =
// log(U*)/c_star - log(U_i)/c_i (>= 0, 0 for the optimal arm);
// min_ratio_gap = min over i != optimal_arm (+inf when there is no other
// arm). A zero min_ratio_gap means the optimal arm is not unique, which
// makes every bound below refuse with ZeroGap.
struct GapProfile {
  int optimal_arm = 0;
  std::vector<double> cost_gap;
  std::vector<double> ratio_gap;
  double min_ratio_gap = 0.0;
};

// true_means in [kQoeMin, kQoeMax], costs > 0; ties break toward the lowest
// index.
GapProfile compute_gaps(std::span<const double> true_means,
                        std::span<const double> unit_costs);

// Realized-reward difference oracle minus policy; can be negative on a
// single replication. Throws BudgetMismatch unless both traces were played
// against the same budget and user count.
double empirical_regret(const EpisodeTrace& oracle_trace,
                        const EpisodeTrace& policy_trace);

// Expected pulls of one suboptimal arm by the end of round tau:
//   8 ln(tau) / (M c_i^2 gap_i^2) + 1 + pi^2/3.
// Throws ZeroGap when ratio_gap <= 0, DomainError when tau < 1.
double pull_count_upper_bound(double tau, int num_users, double unit_cost,
                              double ratio_gap);

// Lower bound on the number of rounds a budget admits:
//   B/(M c*) - c_min/c* - sum_{cost_gap>0} (cost_gap_i/c*) * K_i,
// with K_i the pull-count bound at tau = B/(M c_min). May be <= 0 for small
// budgets (returned as-is). Throws ZeroGap when the optimal arm is not
// unique, DomainError when B < M*c_min.
double round_count_lower_bound(double budget, int num_users,
                               std::span<const double> unit_costs,
                               const GapProfile& gaps);

// Upper bound on expected regret:
//   log(M U*) * (1 + c_min/c* + sum_{cost_gap>0} (cost_gap_i/c*) K_i)
//   + log(U*/qoe_floor) * N * max_{i != i*} K_i.
// Same preconditions as round_count_lower_bound; qoe_floor >= 1.
double regret_upper_bound(double budget, int num_users,
                          std::span<const double> unit_costs,
                          std::span<const double> true_means,
                          const GapProfile& gaps, double qoe_floor = kQoeMin);

// Deterministic stand-in for the oracle's cumulative reward:
//   (floor(B/(M c*)) + 1) * log(M U*).
double oracle_reward_proxy(double budget, int num_users, double optimal_cost,
                           double optimal_mean);

struct LogFit {
  double coefficient = 0.0;
  double r_squared = 0.0;
};

// Through-origin least squares of regret ~ m * ln(B) over (B, regret)
// points: m = sum r ln(B) / sum ln^2(B); r_squared is the uncentered
// coefficient of determination (1 for the all-zero regret series).
// Needs >= 3 points, every B > 1, distinct B values, finite regrets.
LogFit fit_log_coefficient(
    std::span<const std::pair<double, double>> points);

// Bound values next to their empirical counterparts for one configuration.
// pull_bound is NaN for the optimal arm (the bound covers suboptimal arms).
struct BoundReport {
  std::vector<double> pull_bound;
  double rounds_lower = 0.0;
  double regret_upper = 0.0;
  std::vector<double> empirical_pulls;
  std::vector<double> empirical_pulls_se;
  double empirical_rounds = 0.0;
  double empirical_rounds_se = 0.0;
  double empirical_regret = 0.0;
  double empirical_regret_se = 0.0;
};

}  // namespace bucb
