#include "bucb/policies.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace bucb {

PolicyKind PolicyKind::budgeted_ucb() { return {}; }

PolicyKind PolicyKind::oracle() {
  PolicyKind k;
  k.family = PolicyFamily::Oracle;
  return k;
}

PolicyKind PolicyKind::epsilon_greedy(double eps, bool rank_by_cost_ratio) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw ConfigError("epsilon must be in [0,1], got " + std::to_string(eps));
  }
  PolicyKind k;
  k.family = PolicyFamily::EpsilonGreedy;
  k.epsilon = eps;
  k.rank_by_cost_ratio = rank_by_cost_ratio;
  return k;
}

PolicyKind PolicyKind::epsilon_greedy_decaying(bool rank_by_cost_ratio) {
  PolicyKind k;
  k.family = PolicyFamily::EpsilonGreedy;
  k.epsilon_rule = EpsilonRule::OneOverRound;
  k.rank_by_cost_ratio = rank_by_cost_ratio;
  return k;
}

PolicyKind PolicyKind::explore_then_commit(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("explore fraction must be in (0,1), got " +
                      std::to_string(fraction));
  }
  PolicyKind k;
  k.family = PolicyFamily::ExploreThenCommit;
  k.explore_fraction = fraction;
  return k;
}

std::string PolicyKind::name() const {
  switch (family) {
    case PolicyFamily::BudgetedUcb:
      return "bucb";
    case PolicyFamily::Oracle:
      return "oracle";
    case PolicyFamily::EpsilonGreedy:
      if (epsilon_rule == EpsilonRule::OneOverRound) return "epx";
      return "ep" + std::to_string(
                        static_cast<int>(std::lround(epsilon * 100.0)));
    case PolicyFamily::ExploreThenCommit:
      return "etc" + std::to_string(static_cast<int>(
                         std::lround(explore_fraction * 100.0)));
  }
  throw DomainError("unreachable policy family");
}

PolicyKind PolicyKind::parse(const std::string& name) {
  if (name == "bucb") return budgeted_ucb();
  if (name == "oracle") return oracle();
  if (name == "epx") return epsilon_greedy_decaying();
  auto digits = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
      return std::isdigit(c);
    });
  };
  if (name.rfind("etc", 0) == 0 && digits(name.substr(3))) {
    return explore_then_commit(std::stoi(name.substr(3)) / 100.0);
  }
  if (name.rfind("ep", 0) == 0 && digits(name.substr(2))) {
    return epsilon_greedy(std::stoi(name.substr(2)) / 100.0);
  }
  throw ConfigError("unknown policy name \"" + name + "\"");
}

std::uint64_t PolicyKind::stream_tag() const {
  return hash_key({static_cast<std::uint64_t>(family),
                   static_cast<std::uint64_t>(epsilon_rule),
                   std::bit_cast<std::uint64_t>(epsilon),
                   std::bit_cast<std::uint64_t>(explore_fraction),
                   static_cast<std::uint64_t>(rank_by_cost_ratio)});
}

PolicyState::PolicyState(int num_arms) {
  if (num_arms < 1) throw DegenerateInput("policy needs at least one arm");
  pull_counts.assign(static_cast<std::size_t>(num_arms), 0);
  empirical_means.assign(static_cast<std::size_t>(num_arms), 0.0);
  padded_means.assign(static_cast<std::size_t>(num_arms),
                      std::numeric_limits<double>::infinity());
}

double exploration_bonus(std::int64_t round, std::int64_t pulls,
                         int num_users) {
  if (round < 1) {
    throw DomainError("exploration bonus needs round >= 1, got " +
                      std::to_string(round));
  }
  if (pulls < 1) throw ArmNeverPulled("exploration bonus before first pull");
  if (num_users < 1) throw DegenerateInput("num_users must be >= 1");
  return std::sqrt(2.0 * std::log(static_cast<double>(round)) /
                   (static_cast<double>(pulls) * num_users));
}

double update_empirical_mean(double prev_mean, std::int64_t prev_pulls,
                             std::span<const double> feedback) {
  if (feedback.empty()) throw DegenerateInput("empty feedback vector");
  if (prev_pulls < 0) throw DomainError("negative pull count");
  const double m = static_cast<double>(feedback.size());
  const double sum = std::accumulate(feedback.begin(), feedback.end(), 0.0);
  return (prev_mean * static_cast<double>(prev_pulls) * m + sum) /
         (static_cast<double>(prev_pulls + 1) * m);
}

std::vector<int> feasible_arms(std::span<const double> unit_costs,
                               int num_users, double remaining) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(unit_costs.size()); ++i) {
    if (num_users * unit_costs[static_cast<std::size_t>(i)] <= remaining) {
      out.push_back(i);
    }
  }
  return out;
}

int best_ratio_arm(std::span<const int> candidates,
                   std::span<const double> values,
                   std::span<const double> unit_costs) {
  if (candidates.empty()) throw DegenerateInput("no candidate arms");
  int best = candidates[0];
  double best_ratio = std::log(values[static_cast<std::size_t>(best)]) /
                      unit_costs[static_cast<std::size_t>(best)];
  for (int i : candidates.subspan(1)) {
    const double r = std::log(values[static_cast<std::size_t>(i)]) /
                     unit_costs[static_cast<std::size_t>(i)];
    if (r > best_ratio) {
      best = i;
      best_ratio = r;
    }
  }
  return best;
}

int next_initialization_arm(const PolicyState& state) {
  for (int i = 0; i < state.num_arms(); ++i) {
    if (state.pull_counts[static_cast<std::size_t>(i)] == 0) return i;
  }
  throw DomainError("every arm has already been pulled");
}

std::optional<int> ucb_select(const PolicyState& state,
                              std::span<const double> unit_costs,
                              int num_users, double remaining) {
  for (auto c : state.pull_counts) {
    if (c < 1) throw NotInitialized("selection before the initial sweep");
  }
  const auto feas = feasible_arms(unit_costs, num_users, remaining);
  if (feas.empty()) return std::nullopt;
  return best_ratio_arm(feas, state.padded_means, unit_costs);
}

std::optional<int> oracle_select(std::span<const double> true_means,
                                 std::span<const double> unit_costs,
                                 int num_users, double remaining) {
  const auto feas = feasible_arms(unit_costs, num_users, remaining);
  if (feas.empty()) return std::nullopt;
  return best_ratio_arm(feas, true_means, unit_costs);
}

namespace {
// Sorting + validation up front so the ledger below only ever sees a budget
// the whole configuration has vouched for.
std::vector<ArmSpec> checked_arms(std::vector<ArmSpec> arms, int num_users,
                                  double budget, UtilityFunction utility) {
  std::sort(arms.begin(), arms.end(),
            [](const ArmSpec& a, const ArmSpec& b) { return a.id < b.id; });
  SystemConfig cfg;
  cfg.arms = arms;
  cfg.num_users = num_users;
  cfg.budget = budget;
  cfg.utility = utility;
  validate_config(cfg);
  return arms;
}
}  // namespace

Episode::Episode(PolicyKind kind, std::vector<ArmSpec> arms, int num_users,
                 double budget, UtilityFunction utility, FeedbackStream stream)
    : kind_(kind),
      arms_(checked_arms(std::move(arms), num_users, budget, utility)),
      num_users_(num_users),
      utility_(utility),
      stream_(stream),
      ledger_(budget),
      state_(static_cast<int>(arms_.size())) {
  unit_costs_.reserve(arms_.size());
  for (const auto& a : arms_) {
    unit_costs_.push_back(a.unit_cost);
    dists_.push_back(make_arm_distribution(a));
    true_means_.push_back(dists_.back().mean());
  }
  if (kind_.family == PolicyFamily::Oracle) state_.phase = Phase::Selecting;

  trace_.policy = kind_.name();
  trace_.budget = budget;
  trace_.num_users = num_users_;
}

void Episode::refresh_padded_means() {
  for (int i = 0; i < state_.num_arms(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (state_.pull_counts[idx] < 1) continue;
    state_.padded_means[idx] =
        state_.empirical_means[idx] +
        exploration_bonus(state_.round, state_.pull_counts[idx], num_users_);
  }
}

std::optional<int> Episode::epsilon_greedy_select() {
  const auto feas =
      feasible_arms(unit_costs_, num_users_, ledger_.remaining());
  if (feas.empty()) return std::nullopt;
  const std::int64_t t = state_.round + 1;  // the round being played, 1-based
  const double eps = kind_.epsilon_rule == EpsilonRule::OneOverRound
                         ? 1.0 / static_cast<double>(t)
                         : kind_.epsilon;
  const double coin = stream_.exploration_uniform(kind_.stream_tag(), t, 0);
  if (coin < eps) {
    const double pick = stream_.exploration_uniform(kind_.stream_tag(), t, 1);
    const auto k = std::min(static_cast<std::size_t>(pick * feas.size()),
                            feas.size() - 1);
    return feas[k];
  }
  if (kind_.rank_by_cost_ratio) {
    return best_ratio_arm(feas, state_.empirical_means, unit_costs_);
  }
  int best = feas[0];
  for (int i : feas) {
    if (state_.empirical_means[static_cast<std::size_t>(i)] >
        state_.empirical_means[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

std::optional<int> Episode::etc_select() {
  const double remaining = ledger_.remaining();
  const auto feas = feasible_arms(unit_costs_, num_users_, remaining);
  if (feas.empty()) return std::nullopt;
  const int n = state_.num_arms();
  if (!etc_committed_) {
    // Exploration runs while spending is still below the share; the crossing
    // pull is taken, so the share is always exhausted before committing.
    if (ledger_.total_spent() < kind_.explore_fraction * ledger_.initial()) {
      for (int k = 0; k < n; ++k) {
        const int i = (etc_cursor_ + k) % n;
        const double cost =
            num_users_ * unit_costs_[static_cast<std::size_t>(i)];
        if (cost > remaining) continue;  // cycle skips unaffordable arms
        etc_cursor_ = (i + 1) % n;
        return i;
      }
    }
    etc_committed_ = true;
    state_.phase = Phase::Selecting;
  }
  std::vector<int> pulled;
  for (int i : feas) {
    if (state_.pull_counts[static_cast<std::size_t>(i)] >= 1) pulled.push_back(i);
  }
  if (pulled.empty()) return feas[0];  // nothing sampled yet: cheapest-id arm
  return best_ratio_arm(pulled, state_.empirical_means, unit_costs_);
}

std::optional<int> Episode::select_arm() {
  switch (kind_.family) {
    case PolicyFamily::BudgetedUcb:
    case PolicyFamily::EpsilonGreedy:
      if (state_.phase == Phase::Initializing) {
        const int i = next_initialization_arm(state_);
        const double cost =
            num_users_ * unit_costs_[static_cast<std::size_t>(i)];
        if (!ledger_.can_afford(cost)) return std::nullopt;  // unreachable
        return i;
      }
      if (kind_.family == PolicyFamily::BudgetedUcb) {
        return ucb_select(state_, unit_costs_, num_users_,
                          ledger_.remaining());
      }
      return epsilon_greedy_select();
    case PolicyFamily::Oracle:
      return oracle_select(true_means_, unit_costs_, num_users_,
                           ledger_.remaining());
    case PolicyFamily::ExploreThenCommit:
      return etc_select();
  }
  throw DomainError("unreachable policy family");
}

bool Episode::step() {
  if (state_.phase == Phase::Exhausted) return false;
  const auto pick = select_arm();
  if (!pick) {
    state_.phase = Phase::Exhausted;
    return false;
  }
  const int i = *pick;
  const auto idx = static_cast<std::size_t>(i);
  const double cost = num_users_ * unit_costs_[idx];
  const auto qoe = sample_feedback(stream_, dists_[idx], arms_[idx].id,
                                   state_.pull_counts[idx] + 1, num_users_);
  ledger_.debit(cost);
  state_.empirical_means[idx] = update_empirical_mean(
      state_.empirical_means[idx], state_.pull_counts[idx], qoe);
  state_.pull_counts[idx] += 1;
  state_.round += 1;
  if (state_.phase == Phase::Initializing &&
      kind_.family != PolicyFamily::ExploreThenCommit &&
      state_.round >= state_.num_arms()) {
    state_.phase = Phase::Selecting;
  }
  refresh_padded_means();

  const double total_qoe = std::accumulate(qoe.begin(), qoe.end(), 0.0);
  const double util = utility_(total_qoe);
  trace_.rounds.push_back({state_.round, arms_[idx].id, qoe, cost, total_qoe,
                           util, ledger_.remaining()});
  trace_.cumulative_utility += util;
  return true;
}

EpisodeTrace Episode::run() {
  while (step()) {
  }
  trace_.pull_counts = state_.pull_counts;
  trace_.remaining = ledger_.remaining();
  return trace_;
}

}  // namespace bucb
