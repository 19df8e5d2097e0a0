#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bucb/core.hpp"
#include "bucb/env.hpp"
#include "bucb/rng.hpp"

namespace bucb {

enum class PolicyFamily {
  BudgetedUcb,
  Oracle,
  EpsilonGreedy,
  ExploreThenCommit,
};

enum class EpsilonRule { Fixed, OneOverRound };

// Value-type policy descriptor; the episode engine interprets it. parse()
// accepts the CSV/config names: bucb, oracle, ep1, ep5, epx, etc15, etc20,
// etc25 (and the general forms ep<pct*100>, etc<pct>).
struct PolicyKind {
  PolicyFamily family = PolicyFamily::BudgetedUcb;
  EpsilonRule epsilon_rule = EpsilonRule::Fixed;
  double epsilon = 0.0;            // EpsilonGreedy, Fixed rule
  double explore_fraction = 0.0;   // ExploreThenCommit
  bool rank_by_cost_ratio = true;  // EpsilonGreedy exploit ranking

  static PolicyKind budgeted_ucb();
  static PolicyKind oracle();
  static PolicyKind epsilon_greedy(double eps, bool rank_by_cost_ratio = true);
  static PolicyKind epsilon_greedy_decaying(bool rank_by_cost_ratio = true);
  static PolicyKind explore_then_commit(double fraction);
  static PolicyKind parse(const std::string& name);

  std::string name() const;
  std::uint64_t stream_tag() const;  // keys the policy's exploration stream
};

enum class Phase { Initializing, Selecting, Exhausted };

// Everything a policy carries between rounds. round counts completed rounds;
// padded_means[i] is the empirical mean plus the exploration bonus, refreshed
// at the end of every round, +inf until arm i has been pulled.
struct PolicyState {
  std::int64_t round = 0;
  std::vector<std::int64_t> pull_counts;
  std::vector<double> empirical_means;
  std::vector<double> padded_means;
  Phase phase = Phase::Initializing;

  explicit PolicyState(int num_arms);
  int num_arms() const { return static_cast<int>(pull_counts.size()); }
};

// sqrt(2 ln(round) / (pulls * num_users)); 0 when round == 1 (ln 1 = 0).
// Throws ArmNeverPulled when pulls == 0, DomainError when round < 1.
double exploration_bonus(std::int64_t round, std::int64_t pulls,
                         int num_users);

// Running mean over all per-user samples of one arm:
//   (prev_mean * prev_pulls * M + sum(feedback)) / ((prev_pulls + 1) * M).
double update_empirical_mean(double prev_mean, std::int64_t prev_pulls,
                             std::span<const double> feedback);

// Shared helper: arms the ledger can still afford one full round of.
std::vector<int> feasible_arms(std::span<const double> unit_costs,
                               int num_users, double remaining);

// argmax of values[i]/unit_costs[i] over `candidates` after a log transform
// of values; ties break toward the lowest index. candidates must be nonempty.
int best_ratio_arm(std::span<const int> candidates,
                   std::span<const double> values,
                   std::span<const double> unit_costs);

// The lowest-index arm still unpulled; DomainError once every arm has been
// pulled (the initialization sweep is over).
int next_initialization_arm(const PolicyState& state);

// Pure selection rules. All return std::nullopt when no arm is affordable.
std::optional<int> ucb_select(const PolicyState& state,
                              std::span<const double> unit_costs,
                              int num_users, double remaining);
std::optional<int> oracle_select(std::span<const double> true_means,
                                 std::span<const double> unit_costs,
                                 int num_users, double remaining);

struct RoundRecord {
  std::int64_t round = 0;  // 1-based
  int arm_id = 0;          // 1-based
  std::vector<double> feedback;  // per-user QoE
  double cost = 0.0;       // num_users * unit_cost
  double total_qoe = 0.0;
  double utility = 0.0;
  double remaining = 0.0;  // after this round's debit
};

struct EpisodeTrace {
  std::string policy;
  double budget = 0.0;
  int num_users = 0;
  std::vector<RoundRecord> rounds;
  std::vector<std::int64_t> pull_counts;
  double cumulative_utility = 0.0;
  double remaining = 0.0;
  std::int64_t total_rounds() const {
    return static_cast<std::int64_t>(rounds.size());
  }
};

// Drives one policy against one budget with one feedback stream. step()
// plays a single round and returns false once the policy is exhausted
// (no affordable arm). run() plays to exhaustion and returns the trace.
class Episode {
 public:
  Episode(PolicyKind kind, std::vector<ArmSpec> arms, int num_users,
          double budget, UtilityFunction utility, FeedbackStream stream);

  bool step();
  EpisodeTrace run();

  const PolicyState& state() const { return state_; }
  const BudgetLedger& ledger() const { return ledger_; }
  const std::vector<double>& true_means() const { return true_means_; }
  const EpisodeTrace& trace() const { return trace_; }

 private:
  std::optional<int> select_arm();
  std::optional<int> epsilon_greedy_select();
  std::optional<int> etc_select();
  void refresh_padded_means();

  PolicyKind kind_;
  std::vector<ArmSpec> arms_;
  std::vector<double> unit_costs_;
  std::vector<TruncatedGaussian> dists_;
  std::vector<double> true_means_;
  int num_users_;
  UtilityFunction utility_;
  FeedbackStream stream_;
  BudgetLedger ledger_;
  PolicyState state_;
  EpisodeTrace trace_;
  int etc_cursor_ = 0;        // next arm in the exploration cycle
  bool etc_committed_ = false;
};

}  // namespace bucb
