"""Graph ranking as exchange-market equilibrium prices."""

from ._core import (
    CesEconomy,
    ConvergenceError,
    Error,
    InvalidArgument,
    NormalizedProblem,
    NotStronglyConnected,
    ParseError,
    RankingProblem,
    build_economy,
    ces_demand,
    ces_ranking,
    check_invariance,
    check_minimal_fairness,
    check_strict_monotonicity,
    check_uniformity,
    excess_demand,
    gs_spot_check,
    is_aperiodic,
    is_regular,
    is_strongly_connected,
    load_problem,
    markov_to_economy,
    multistart_probe,
    normalize_preferences,
    parse_problem,
    regular_counterexample,
    serialize_problem,
    solve_equilibrium,
    stationary_distribution,
    verify_equilibrium,
    web_transition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
