#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bucb {

// Error taxonomy. Every failure the library reports derives from Error and
// carries a stable kind() tag so callers (and the CLI) can switch on it
// without string matching.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define BUCB_ERROR(NAME)                                 \
  class NAME : public Error {                            \
   public:                                               \
    explicit NAME(const std::string& what)               \
        : Error(#NAME, what) {}                          \
  }

BUCB_ERROR(BudgetTooSmall);
BUCB_ERROR(QoeOutOfRange);
BUCB_ERROR(NonPositiveCost);
BUCB_ERROR(DomainError);
BUCB_ERROR(ArmNeverPulled);
BUCB_ERROR(NotInitialized);
BUCB_ERROR(ZeroGap);
BUCB_ERROR(BudgetMismatch);
BUCB_ERROR(DegenerateInput);
BUCB_ERROR(ConfigError);

#undef BUCB_ERROR

// One service class: QoE level the provider can hand a user, its noise, and
// the per-user unit cost of serving at that class.
struct ArmSpec {
  int id = 0;  // 1-based, unique
  double expected_qoe = 0.0;
  double noise_sigma = 0.1;
  double unit_cost = 0.0;

  friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

// Concave utility of the total QoE delivered in one round. Only the natural
// log is supported; the enum keeps the CSVs and config honest about that.
enum class UtilityKind { NaturalLog };

struct UtilityFunction {
  UtilityKind kind = UtilityKind::NaturalLog;
  double operator()(double total_qoe) const;
};

// evaluate_utility(u, x): ln(x); throws DomainError for x <= 0.
double evaluate_utility(const UtilityFunction& u, double total_qoe);

struct SystemConfig {
  std::vector<ArmSpec> arms;
  int num_users = 1;       // M
  double budget = 0.0;     // B
  UtilityFunction utility;
  std::uint64_t base_seed = 0;
  int replications = 1;
};

// QoE support. Feedback is truncated to [kQoeMin, kQoeMax]; the lower edge
// being >= 1 keeps ln() nonnegative and the concavity bounds valid.
inline constexpr double kQoeMin = 1.0;
inline constexpr double kQoeMax = 2.0;

// Budget conservation tolerance, relative to the initial budget.
inline constexpr double kBudgetRelTol = 1e-9;

double min_unit_cost(std::span<const ArmSpec> arms);
double max_unit_cost(std::span<const ArmSpec> arms);

// Cost of the initialization sweep (one pull of every arm, M users each).
double total_init_cost(std::span<const ArmSpec> arms, int num_users);

// Validates and returns its argument. Throws:
//   DegenerateInput  - no arms, duplicate/inverted ids, M < 1, reps < 1
//   QoeOutOfRange    - expected_qoe outside [kQoeMin, kQoeMax], sigma <= 0
//   NonPositiveCost  - unit_cost <= 0
//   BudgetTooSmall   - budget below the initialization sweep cost
const SystemConfig& validate_config(const SystemConfig& config);

// Tracks spend against a fixed initial budget. Spend accumulates so that
// remaining() = initial - total_spent is computed by one subtraction; with
// every debit gated on remaining() >= amount the result never dips below
// zero in exact arithmetic, and conservation is enforced to kBudgetRelTol.
class BudgetLedger {
 public:
  explicit BudgetLedger(double initial);

  double initial() const { return initial_; }
  double total_spent() const { return total_spent_; }
  double remaining() const { return initial_ - total_spent_; }
  std::int64_t rounds_elapsed() const { return rounds_; }

  bool can_afford(double amount) const { return remaining() >= amount; }

  // Records one round costing `amount`. Throws BudgetMismatch if the debit
  // would overdraw beyond tolerance, DomainError if amount <= 0.
  void debit(double amount);

 private:
  double initial_;
  double total_spent_ = 0.0;
  std::int64_t rounds_ = 0;
};

}  // namespace bucb
