#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bucb/core.hpp"
#include "bucb/rng.hpp"

using namespace bucb;

namespace {
SystemConfig two_arm_config(double budget) {
  SystemConfig cfg;
  cfg.arms = {{1, 1.5, 0.1, 1.0}, {2, 1.2, 0.1, 1.0}};
  cfg.num_users = 2;
  cfg.budget = budget;
  return cfg;
}
}  // namespace

TEST_CASE("utility is the natural log") {
  UtilityFunction g;
  CHECK(evaluate_utility(g, 1.0) == 0.0);
  CHECK(evaluate_utility(g, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  // frozen high-precision value of ln(10)
  CHECK(evaluate_utility(g, 10.0) ==
        doctest::Approx(2.302585092994045684).epsilon(1e-15));
  CHECK(g(10.0) == evaluate_utility(g, 10.0));
}

TEST_CASE("utility rejects non-positive totals") {
  UtilityFunction g;
  CHECK_THROWS_AS(evaluate_utility(g, 0.0), DomainError);
  CHECK_THROWS_AS(evaluate_utility(g, -3.0), DomainError);
}

TEST_CASE("utility is strictly increasing on the feedback range") {
  UtilityFunction g;
  double prev = evaluate_utility(g, 1.0);
  for (int k = 1; k <= 400; ++k) {
    const double x = 1.0 + k * (40.0 - 1.0) / 400.0;  // up to 2*M_max=40
    const double y = evaluate_utility(g, x);
    CHECK(y > prev);
    prev = y;
  }
}

TEST_CASE("log difference is dominated by the argument difference") {
  // for x > y >= 1: log(x) - log(y) < x - y
  for (int k = 0; k < 2000; ++k) {
    const double y = 1.0 + 39.0 * uniform_from_bits(hash_key({7u, (std::uint64_t)k, 0u}));
    const double x = y + 39.0 * uniform_from_bits(hash_key({7u, (std::uint64_t)k, 1u})) + 1e-12;
    CHECK(std::log(x) - std::log(y) < x - y);
  }
}

TEST_CASE("validate_config accepts the boundary budget") {
  // budget exactly covering one pull of every arm is valid
  auto cfg = two_arm_config(4.0);
  CHECK(&validate_config(cfg) == &cfg);
}

TEST_CASE("validate_config rejects a budget just below the sweep") {
  auto cfg = two_arm_config(3.9);
  CHECK_THROWS_AS(validate_config(cfg), BudgetTooSmall);
}

TEST_CASE("validate_config rejects out-of-range QoE") {
  auto cfg = two_arm_config(10.0);
  cfg.arms[0].expected_qoe = 2.5;
  CHECK_THROWS_AS(validate_config(cfg), QoeOutOfRange);
  cfg = two_arm_config(10.0);
  cfg.arms[1].noise_sigma = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), QoeOutOfRange);
}

TEST_CASE("validate_config rejects bad costs, ids and counts") {
  auto cfg = two_arm_config(10.0);
  cfg.arms[0].unit_cost = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), NonPositiveCost);

  cfg = two_arm_config(10.0);
  cfg.arms[1].id = 1;
  CHECK_THROWS_AS(validate_config(cfg), DegenerateInput);

  cfg = two_arm_config(10.0);
  cfg.num_users = 0;
  CHECK_THROWS_AS(validate_config(cfg), DegenerateInput);

  cfg = two_arm_config(10.0);
  cfg.arms.clear();
  CHECK_THROWS_AS(validate_config(cfg), DegenerateInput);
}

TEST_CASE("cost helpers") {
  const auto cfg = two_arm_config(10.0);
  CHECK(min_unit_cost(cfg.arms) == 1.0);
  CHECK(max_unit_cost(cfg.arms) == 1.0);
  CHECK(total_init_cost(cfg.arms, 2) == 4.0);
}

TEST_CASE("ledger tracks spend and rounds") {
  BudgetLedger ledger(10.0);
  CHECK(ledger.initial() == 10.0);
  CHECK(ledger.remaining() == 10.0);
  ledger.debit(2.5);
  ledger.debit(2.5);
  CHECK(ledger.total_spent() == 5.0);
  CHECK(ledger.remaining() == 5.0);
  CHECK(ledger.rounds_elapsed() == 2);
  CHECK(ledger.can_afford(5.0));
  CHECK_FALSE(ledger.can_afford(5.0000001));
}

TEST_CASE("ledger rejects overdraw and bad amounts") {
  BudgetLedger ledger(1.0);
  CHECK_THROWS_AS(ledger.debit(1.1), BudgetMismatch);
  CHECK_THROWS_AS(ledger.debit(0.0), DomainError);
  CHECK_THROWS_AS(ledger.debit(-2.0), DomainError);
  CHECK_THROWS_AS(BudgetLedger(0.0), DomainError);
  CHECK_THROWS_AS(BudgetLedger(-5.0), DomainError);
}

TEST_CASE("ledger conserves budget across long random debit sequences") {
  const double initial = 1000.0;
  BudgetLedger ledger(initial);
  double mirror = 0.0;
  int k = 0;
  while (true) {
    const double amount =
        0.1 + 3.0 * uniform_from_bits(hash_key({11u, (std::uint64_t)k++}));
    if (!ledger.can_afford(amount)) break;
    ledger.debit(amount);
    mirror += amount;
    CHECK(std::abs(ledger.initial() - ledger.total_spent() -
                   ledger.remaining()) <= kBudgetRelTol * initial);
  }
  CHECK(ledger.total_spent() == doctest::Approx(mirror).epsilon(1e-12));
  CHECK(ledger.rounds_elapsed() == k - 1);
  CHECK(ledger.remaining() >= 0.0);
}
