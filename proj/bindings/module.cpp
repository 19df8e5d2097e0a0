#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "bucb/analysis.hpp"
#include "bucb/core.hpp"
#include "bucb/env.hpp"
#include "bucb/policies.hpp"
#include "bucb/runner.hpp"

namespace py = pybind11;
using namespace bucb;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Budget-constrained bandit core: policies, environment, bounds "
            "and the experiment runner.";

  py::register_exception<Error>(m, "BucbError");

  m.attr("QOE_MIN") = kQoeMin;
  m.attr("QOE_MAX") = kQoeMax;

  py::class_<ArmSpec>(m, "ArmSpec")
      .def(py::init([](int id, double expected_qoe, double unit_cost,
                       double noise_sigma) {
             return ArmSpec{id, expected_qoe, noise_sigma, unit_cost};
           }),
           py::arg("id"), py::arg("expected_qoe"), py::arg("unit_cost"),
           py::arg("noise_sigma") = 0.1)
      .def_readwrite("id", &ArmSpec::id)
      .def_readwrite("expected_qoe", &ArmSpec::expected_qoe)
      .def_readwrite("noise_sigma", &ArmSpec::noise_sigma)
      .def_readwrite("unit_cost", &ArmSpec::unit_cost)
      .def("__eq__",
           [](const ArmSpec& a, const ArmSpec& b) { return a == b; })
      .def("__repr__", [](const ArmSpec& a) {
        return "ArmSpec(id=" + std::to_string(a.id) +
               ", expected_qoe=" + std::to_string(a.expected_qoe) +
               ", unit_cost=" + std::to_string(a.unit_cost) +
               ", noise_sigma=" + std::to_string(a.noise_sigma) + ")";
      });

  py::class_<PolicyKind>(m, "PolicyKind")
      .def_static("budgeted_ucb", &PolicyKind::budgeted_ucb)
      .def_static("oracle", &PolicyKind::oracle)
      .def_static("epsilon_greedy", &PolicyKind::epsilon_greedy,
                  py::arg("epsilon"), py::arg("rank_by_cost_ratio") = true)
      .def_static("epsilon_greedy_decaying", &PolicyKind::epsilon_greedy_decaying,
                  py::arg("rank_by_cost_ratio") = true)
      .def_static("explore_then_commit", &PolicyKind::explore_then_commit,
                  py::arg("fraction"))
      .def_static("parse", &PolicyKind::parse, py::arg("name"))
      .def_readwrite("rank_by_cost_ratio", &PolicyKind::rank_by_cost_ratio)
      .def("name", &PolicyKind::name)
      .def("__repr__",
           [](const PolicyKind& k) { return "PolicyKind(" + k.name() + ")"; });

  py::enum_<CostRegime>(m, "CostRegime")
      .value("LOW", CostRegime::Low)
      .value("MEDIUM", CostRegime::Medium)
      .value("HIGH", CostRegime::High);
  m.def("parse_cost_regime", &parse_cost_regime, py::arg("name"));
  m.def("cost_interval", &cost_interval, py::arg("regime"));

  py::class_<TruncatedGaussian>(m, "TruncatedGaussian")
      .def(py::init<double, double, double, double>(), py::arg("mu"),
           py::arg("sigma"), py::arg("lower") = kQoeMin,
           py::arg("upper") = kQoeMax)
      .def("mean", &TruncatedGaussian::mean)
      .def("quantile", &TruncatedGaussian::quantile, py::arg("u"));

  py::class_<RoundRecord>(m, "RoundRecord")
      .def_readonly("round", &RoundRecord::round)
      .def_readonly("arm_id", &RoundRecord::arm_id)
      .def_readonly("feedback", &RoundRecord::feedback)
      .def_readonly("cost", &RoundRecord::cost)
      .def_readonly("total_qoe", &RoundRecord::total_qoe)
      .def_readonly("utility", &RoundRecord::utility)
      .def_readonly("remaining", &RoundRecord::remaining);

  py::class_<EpisodeTrace>(m, "EpisodeTrace")
      .def_readonly("policy", &EpisodeTrace::policy)
      .def_readonly("budget", &EpisodeTrace::budget)
      .def_readonly("num_users", &EpisodeTrace::num_users)
      .def_readonly("rounds", &EpisodeTrace::rounds)
      .def_readonly("pull_counts", &EpisodeTrace::pull_counts)
      .def_readonly("cumulative_utility", &EpisodeTrace::cumulative_utility)
      .def_readonly("remaining", &EpisodeTrace::remaining)
      .def("total_rounds", &EpisodeTrace::total_rounds);

  m.def("run_episode", &run_episode, py::arg("policy"), py::arg("arms"),
        py::arg("num_users"), py::arg("budget"), py::arg("seed"),
        py::arg("replication") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<GapProfile>(m, "GapProfile")
      .def_readonly("optimal_arm", &GapProfile::optimal_arm)
      .def_readonly("cost_gap", &GapProfile::cost_gap)
      .def_readonly("ratio_gap", &GapProfile::ratio_gap)
      .def_readonly("min_ratio_gap", &GapProfile::min_ratio_gap);

  m.def(
      "compute_gaps",
      [](const std::vector<double>& true_means,
         const std::vector<double>& unit_costs) {
        return compute_gaps(true_means, unit_costs);
      },
      py::arg("true_means"), py::arg("unit_costs"));
  m.def("empirical_regret", &empirical_regret, py::arg("oracle_trace"),
        py::arg("policy_trace"));
  m.def("pull_count_upper_bound", &pull_count_upper_bound, py::arg("tau"),
        py::arg("num_users"), py::arg("unit_cost"), py::arg("ratio_gap"));
  m.def(
      "round_count_lower_bound",
      [](double budget, int num_users, const std::vector<double>& unit_costs,
         const GapProfile& gaps) {
        return round_count_lower_bound(budget, num_users, unit_costs, gaps);
      },
      py::arg("budget"), py::arg("num_users"), py::arg("unit_costs"),
      py::arg("gaps"));
  m.def(
      "regret_upper_bound",
      [](double budget, int num_users, const std::vector<double>& unit_costs,
         const std::vector<double>& true_means, const GapProfile& gaps,
         double qoe_floor) {
        return regret_upper_bound(budget, num_users, unit_costs, true_means,
                                  gaps, qoe_floor);
      },
      py::arg("budget"), py::arg("num_users"), py::arg("unit_costs"),
      py::arg("true_means"), py::arg("gaps"), py::arg("qoe_floor") = kQoeMin);
  m.def("oracle_reward_proxy", &oracle_reward_proxy, py::arg("budget"),
        py::arg("num_users"), py::arg("optimal_cost"),
        py::arg("optimal_mean"));

  py::class_<LogFit>(m, "LogFit")
      .def_readonly("coefficient", &LogFit::coefficient)
      .def_readonly("r_squared", &LogFit::r_squared);
  m.def(
      "fit_log_coefficient",
      [](const std::vector<std::pair<double, double>>& points) {
        return fit_log_coefficient(points);
      },
      py::arg("points"));

  py::class_<ExperimentPlan>(m, "ExperimentPlan")
      .def(py::init<>())
      .def_readwrite("num_arms", &ExperimentPlan::num_arms)
      .def_readwrite("num_users", &ExperimentPlan::num_users)
      .def_readwrite("budget_grid", &ExperimentPlan::budget_grid)
      .def_readwrite("policies", &ExperimentPlan::policies)
      .def_readwrite("cost_regime", &ExperimentPlan::cost_regime)
      .def_readwrite("qoe_range", &ExperimentPlan::qoe_range)
      .def_readwrite("noise_sigma", &ExperimentPlan::noise_sigma)
      .def_readwrite("base_seed", &ExperimentPlan::base_seed)
      .def_readwrite("replications", &ExperimentPlan::replications)
      .def_readwrite("redraw_arms_per_replication",
                     &ExperimentPlan::redraw_arms_per_replication)
      .def_readwrite("threads", &ExperimentPlan::threads)
      .def_readwrite("explicit_arms", &ExperimentPlan::explicit_arms);

  m.def("realize_arms", &realize_arms, py::arg("plan"), py::arg("seed"),
        py::arg("replication") = 0);

  py::class_<ReplicationRow>(m, "ReplicationRow")
      .def_readonly("policy", &ReplicationRow::policy)
      .def_readonly("budget", &ReplicationRow::budget)
      .def_readonly("replication", &ReplicationRow::replication)
      .def_readonly("utility", &ReplicationRow::utility)
      .def_readonly("rounds", &ReplicationRow::rounds)
      .def_readonly("remaining", &ReplicationRow::remaining)
      .def_readonly("regret", &ReplicationRow::regret);

  py::class_<AggregateCell>(m, "AggregateCell")
      .def_readonly("policy", &AggregateCell::policy)
      .def_readonly("budget", &AggregateCell::budget)
      .def_readonly("replications", &AggregateCell::replications)
      .def_readonly("degenerate", &AggregateCell::degenerate)
      .def_readonly("utility_mean", &AggregateCell::utility_mean)
      .def_readonly("utility_se", &AggregateCell::utility_se)
      .def_readonly("regret_paired_mean", &AggregateCell::regret_paired_mean)
      .def_readonly("regret_paired_se", &AggregateCell::regret_paired_se)
      .def_readonly("regret_unpaired_mean",
                    &AggregateCell::regret_unpaired_mean)
      .def_readonly("regret_unpaired_se", &AggregateCell::regret_unpaired_se)
      .def_readonly("regret_proxy_mean", &AggregateCell::regret_proxy_mean)
      .def_readonly("rounds_mean", &AggregateCell::rounds_mean)
      .def_readonly("rounds_se", &AggregateCell::rounds_se)
      .def_readonly("pulls_mean", &AggregateCell::pulls_mean)
      .def_readonly("pulls_se", &AggregateCell::pulls_se);

  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("arms", &PlanResult::arms)
      .def_readonly("true_means", &PlanResult::true_means)
      .def_readonly("gaps", &PlanResult::gaps)
      .def_readonly("rows", &PlanResult::rows)
      .def_readonly("cells", &PlanResult::cells);

  m.def("run_plan", &run_plan, py::arg("plan"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("pull_bound", &BoundReport::pull_bound)
      .def_readonly("rounds_lower", &BoundReport::rounds_lower)
      .def_readonly("regret_upper", &BoundReport::regret_upper)
      .def_readonly("empirical_pulls", &BoundReport::empirical_pulls)
      .def_readonly("empirical_pulls_se", &BoundReport::empirical_pulls_se)
      .def_readonly("empirical_rounds", &BoundReport::empirical_rounds)
      .def_readonly("empirical_rounds_se", &BoundReport::empirical_rounds_se)
      .def_readonly("empirical_regret", &BoundReport::empirical_regret)
      .def_readonly("empirical_regret_se", &BoundReport::empirical_regret_se);

  m.def(
      "bound_report",
      [](const ExperimentPlan& plan, double budget, const PlanResult& result) {
        return bound_report(plan, budget, result);
      },
      py::arg("plan"), py::arg("budget"), py::arg("result"));
  m.def(
      "bound_report_analytic",
      [](const ExperimentPlan& plan, double budget,
         const std::vector<ArmSpec>& arms) {
        return bound_report(plan, budget, arms);
      },
      py::arg("plan"), py::arg("budget"), py::arg("arms"));
}
