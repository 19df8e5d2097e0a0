"""Budget-constrained bandit simulations: policies, environment, analytic
bounds and a deterministic experiment runner.

Everything is implemented in the C++ extension ``bucb._core``; this package
re-exports its public names.
"""

from ._core import (  # noqa: F401
    QOE_MAX,
    QOE_MIN,
    AggregateCell,
    ArmSpec,
    BoundReport,
    BucbError,
    CostRegime,
    EpisodeTrace,
    ExperimentPlan,
    GapProfile,
    LogFit,
    PlanResult,
    PolicyKind,
    ReplicationRow,
    RoundRecord,
    TruncatedGaussian,
    bound_report,
    bound_report_analytic,
    compute_gaps,
    cost_interval,
    empirical_regret,
    fit_log_coefficient,
    oracle_reward_proxy,
    parse_cost_regime,
    pull_count_upper_bound,
    realize_arms,
    regret_upper_bound,
    round_count_lower_bound,
    run_episode,
    run_plan,
)

__version__ = "1.0.0"
