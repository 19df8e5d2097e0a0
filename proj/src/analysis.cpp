#include "bucb/analysis.hpp"

#include <cmath>
#include <limits>

namespace bucb {

namespace {
constexpr double kPiSquaredOverThree = 3.2898681336964528729;

void check_unique_optimum(const GapProfile& gaps) {
  if (!(gaps.min_ratio_gap > 0.0)) {
    throw ZeroGap("optimal arm is not unique; bound undefined");
  }
}
}  // namespace

GapProfile compute_gaps(std::span<const double> true_means,
                        std::span<const double> unit_costs) {
  const std::size_t n = true_means.size();
  if (n == 0 || unit_costs.size() != n) {
    throw DegenerateInput("gaps need matching nonempty means and costs");
  }
  std::vector<double> ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(true_means[i] >= kQoeMin && true_means[i] <= kQoeMax)) {
      throw QoeOutOfRange("true mean outside QoE support");
    }
    if (!(unit_costs[i] > 0.0)) throw NonPositiveCost("unit cost must be > 0");
    ratio[i] = std::log(true_means[i]) / unit_costs[i];
  }
  std::size_t star = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (ratio[i] > ratio[star]) star = i;
  }
  GapProfile g;
  g.optimal_arm = static_cast<int>(star);
  g.cost_gap.resize(n);
  g.ratio_gap.resize(n);
  g.min_ratio_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    g.cost_gap[i] = unit_costs[i] - unit_costs[star];
    g.ratio_gap[i] = ratio[star] - ratio[i];
    if (i != star) g.min_ratio_gap = std::min(g.min_ratio_gap, g.ratio_gap[i]);
  }
  return g;
}

double empirical_regret(const EpisodeTrace& oracle_trace,
                        const EpisodeTrace& policy_trace) {
  if (oracle_trace.budget != policy_trace.budget) {
    throw BudgetMismatch("traces played against different budgets");
  }
  if (oracle_trace.num_users != policy_trace.num_users) {
    throw BudgetMismatch("traces played with different user counts");
  }
  return oracle_trace.cumulative_utility - policy_trace.cumulative_utility;
}

double pull_count_upper_bound(double tau, int num_users, double unit_cost,
                              double ratio_gap) {
  if (!(tau >= 1.0)) throw DomainError("pull bound needs tau >= 1");
  if (num_users < 1) throw DegenerateInput("num_users must be >= 1");
  if (!(unit_cost > 0.0)) throw NonPositiveCost("unit cost must be > 0");
  if (!(ratio_gap > 0.0)) {
    throw ZeroGap("pull bound undefined for zero ratio gap");
  }
  return 8.0 * std::log(tau) /
             (num_users * unit_cost * unit_cost * ratio_gap * ratio_gap) +
         1.0 + kPiSquaredOverThree;
}

double round_count_lower_bound(double budget, int num_users,
                               std::span<const double> unit_costs,
                               const GapProfile& gaps) {
  const std::size_t n = unit_costs.size();
  if (n == 0 || gaps.cost_gap.size() != n) {
    throw DegenerateInput("gap profile does not match the cost vector");
  }
  if (n > 1) check_unique_optimum(gaps);
  double c_min = unit_costs[0];
  for (double c : unit_costs) c_min = std::min(c_min, c);
  if (!(budget >= num_users * c_min)) {
    throw DomainError("budget below a single cheapest round");
  }
  const double c_star =
      unit_costs[static_cast<std::size_t>(gaps.optimal_arm)];
  const double tau_cap = budget / (num_users * c_min);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (gaps.cost_gap[i] > 0.0) {
      sum += (gaps.cost_gap[i] / c_star) *
             pull_count_upper_bound(tau_cap, num_users, unit_costs[i],
                                    gaps.ratio_gap[i]);
    }
  }
  return budget / (num_users * c_star) - c_min / c_star - sum;
}

double regret_upper_bound(double budget, int num_users,
                          std::span<const double> unit_costs,
                          std::span<const double> true_means,
                          const GapProfile& gaps, double qoe_floor) {
  const std::size_t n = unit_costs.size();
  if (n == 0 || true_means.size() != n || gaps.ratio_gap.size() != n) {
    throw DegenerateInput("gap profile does not match the instance");
  }
  if (!(qoe_floor >= 1.0)) throw DomainError("qoe_floor must be >= 1");
  if (n > 1) check_unique_optimum(gaps);
  double c_min = unit_costs[0];
  for (double c : unit_costs) c_min = std::min(c_min, c);
  if (!(budget >= num_users * c_min)) {
    throw DomainError("budget below a single cheapest round");
  }
  const auto star = static_cast<std::size_t>(gaps.optimal_arm);
  const double c_star = unit_costs[star];
  const double u_star = true_means[star];
  const double tau_cap = budget / (num_users * c_min);

  double sum = 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == star) continue;
    const double k_i = pull_count_upper_bound(tau_cap, num_users,
                                              unit_costs[i], gaps.ratio_gap[i]);
    if (gaps.cost_gap[i] > 0.0) sum += (gaps.cost_gap[i] / c_star) * k_i;
    worst = std::max(worst, k_i);
  }
  return std::log(num_users * u_star) * (1.0 + c_min / c_star + sum) +
         std::log(u_star / qoe_floor) * static_cast<double>(n) * worst;
}

double oracle_reward_proxy(double budget, int num_users, double optimal_cost,
                           double optimal_mean) {
  if (!(optimal_cost > 0.0)) throw NonPositiveCost("unit cost must be > 0");
  if (num_users < 1) throw DegenerateInput("num_users must be >= 1");
  const double rounds =
      std::floor(budget / (num_users * optimal_cost)) + 1.0;
  return rounds * std::log(num_users * optimal_mean);
}

LogFit fit_log_coefficient(
    std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw DegenerateInput("log fit needs at least 3 points");
  }
  double first_b = points[0].first;
  bool all_equal = true;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [b, r] : points) {
    if (!(b > 1.0)) throw DomainError("log fit needs budgets > 1");
    if (!std::isfinite(r)) throw DomainError("log fit needs finite regrets");
    if (b != first_b) all_equal = false;
    const double x = std::log(b);
    sxx += x * x;
    sxy += x * r;
    syy += r * r;
  }
  if (all_equal) throw DegenerateInput("log fit needs distinct budgets");
  LogFit fit;
  if (syy == 0.0) {
    // all-zero regret: the zero model is exact
    fit.coefficient = 0.0;
    fit.r_squared = 1.0;
    return fit;
  }
  fit.coefficient = sxy / sxx;
  double ss_res = 0.0;
  for (const auto& [b, r] : points) {
    const double e = r - fit.coefficient * std::log(b);
    ss_res += e * e;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

}  // namespace bucb
