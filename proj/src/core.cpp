#include "bucb/core.hpp"

#include <cmath>
#include <set>

namespace bucb {

double UtilityFunction::operator()(double total_qoe) const {
  return evaluate_utility(*this, total_qoe);
}

double evaluate_utility(const UtilityFunction& u, double total_qoe) {
  (void)u;  // single kind for now
  if (!(total_qoe > 0.0)) {
    throw DomainError("utility requires a positive total QoE, got " +
                      std::to_string(total_qoe));
  }
  return std::log(total_qoe);
}

double min_unit_cost(std::span<const ArmSpec> arms) {
  if (arms.empty()) throw DegenerateInput("min_unit_cost of empty arm set");
  double m = arms[0].unit_cost;
  for (const auto& a : arms) m = std::min(m, a.unit_cost);
  return m;
}

double max_unit_cost(std::span<const ArmSpec> arms) {
  if (arms.empty()) throw DegenerateInput("max_unit_cost of empty arm set");
  double m = arms[0].unit_cost;
  for (const auto& a : arms) m = std::max(m, a.unit_cost);
  return m;
}

double total_init_cost(std::span<const ArmSpec> arms, int num_users) {
  double total = 0.0;
  for (const auto& a : arms) total += a.unit_cost * num_users;
  return total;
}

const SystemConfig& validate_config(const SystemConfig& config) {
  if (config.arms.empty()) throw DegenerateInput("config has no arms");
  if (config.num_users < 1) {
    throw DegenerateInput("num_users must be >= 1, got " +
                          std::to_string(config.num_users));
  }
  if (config.replications < 1) {
    throw DegenerateInput("replications must be >= 1, got " +
                          std::to_string(config.replications));
  }
  std::set<int> ids;
  for (const auto& a : config.arms) {
    if (a.id < 1) {
      throw DegenerateInput("arm ids are 1-based, got " + std::to_string(a.id));
    }
    if (!ids.insert(a.id).second) {
      throw DegenerateInput("duplicate arm id " + std::to_string(a.id));
    }
    if (!(a.expected_qoe >= kQoeMin && a.expected_qoe <= kQoeMax)) {
      throw QoeOutOfRange("arm " + std::to_string(a.id) + " expected_qoe " +
                          std::to_string(a.expected_qoe) + " outside [" +
                          std::to_string(kQoeMin) + ", " +
                          std::to_string(kQoeMax) + "]");
    }
    if (!(a.noise_sigma > 0.0)) {
      throw QoeOutOfRange("arm " + std::to_string(a.id) +
                          " noise_sigma must be > 0");
    }
    if (!(a.unit_cost > 0.0)) {
      throw NonPositiveCost("arm " + std::to_string(a.id) + " unit_cost " +
                            std::to_string(a.unit_cost) + " must be > 0");
    }
  }
  const double init_cost = total_init_cost(config.arms, config.num_users);
  if (config.budget < init_cost) {
    throw BudgetTooSmall("budget " + std::to_string(config.budget) +
                         " cannot cover one pull of every arm (needs " +
                         std::to_string(init_cost) + ")");
  }
  return config;
}

BudgetLedger::BudgetLedger(double initial) : initial_(initial) {
  if (!(initial > 0.0) || !std::isfinite(initial)) {
    throw DomainError("budget must be positive and finite, got " +
                      std::to_string(initial));
  }
}

void BudgetLedger::debit(double amount) {
  if (!(amount > 0.0) || !std::isfinite(amount)) {
    throw DomainError("debit amount must be positive and finite");
  }
  if (amount > remaining() + kBudgetRelTol * initial_) {
    throw BudgetMismatch("debit " + std::to_string(amount) +
                         " exceeds remaining budget " +
                         std::to_string(remaining()));
  }
  total_spent_ += amount;
  ++rounds_;
}

}  // namespace bucb
