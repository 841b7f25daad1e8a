"""Strategic proxy voting on the real line.

Weighted-median elections with Tullock delegation, exact better-response
machinery, iterative dynamics with convergence checking, and the
winner-only partial-information layer, all backed by brute-force oracles.
Proxy ids are 0-based in this API and 1-based in CLI reports.
"""

from .dynamics import (
    DynamicsTrace,
    MetaSegment,
    MetaStepLabel,
    MoveRecord,
    PolicyKind,
    PolicySpec,
    Scheduler,
    StopReason,
    check_bound_invariant,
    classify_meta_steps,
    detect_meta_moves,
    monotone_median_check,
    run_dynamics,
    step,
    trace_is_monotone,
)
from .errors import (
    ConfigurationError,
    EmptyElectorateError,
    GridBudgetError,
    InconsistentObservationError,
    ProxylineError,
    SamplingBudgetError,
    ScenarioValidationError,
)
from .intervals import Interval, IntervalSet
from .manipulation import (
    ManipulationVerdict,
    better_response_set,
    characterize_truthful_manipulability,
    follower_manipulation_scan,
    is_better_response,
    is_pne,
)
from .metrics import OutcomeReport, delta, outcome_report, social_cost, true_median
from .model import (
    DeclaredState,
    Scenario,
    Space,
    TieBreakRule,
    delegate,
    delegation_weights,
    nearest_proxy_to_median,
    unweighted_median,
    weighted_median,
    wm_winner,
)
from .oracle import (
    DominatingCheck,
    DominatingVerdict,
    GridSpec,
    oracle_best_deviation,
    oracle_dominating_check,
)
from .partial_info import (
    BeliefState,
    MinimaxDecision,
    Neighbor,
    ObservedState,
    dominating_set_nonwinner,
    dominating_set_winner,
    init_belief,
    init_median_interval,
    max_regret,
    minimax_regret_strategy,
    observe,
    sample_consistent_profile,
    update_belief,
    update_median_interval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
