"""Age-of-Information scheduling on a rate-limited link.

Thin python surface over the C++ core: average-cost MDP solvers, the
multi-threshold policy representation, exact renewal-reward evaluation and a
Monte Carlo simulator.
"""

from ._core import (
    Action,
    EpochStats,
    Params,
    ShapeError,
    SimReport,
    SolveConfig,
    SolveError,
    State,
    SweepRow,
    TabularPolicy,
    ThresholdPolicy,
    cost,
    decide,
    delta_m_for_eval,
    epoch_coords,
    eval_threshold_exact,
    evaluate_stationary,
    extract_thresholds,
    myopic_closed_form,
    simulate,
    solve_rvi,
    solve_structured,
    sweep,
    tabulate,
    transitions,
    __version__,
)

__all__ = [
    "Action",
    "EpochStats",
    "Params",
    "ShapeError",
    "SimReport",
    "SolveConfig",
    "SolveError",
    "State",
    "SweepRow",
    "TabularPolicy",
    "ThresholdPolicy",
    "cost",
    "decide",
    "delta_m_for_eval",
    "epoch_coords",
    "eval_threshold_exact",
    "evaluate_stationary",
    "extract_thresholds",
    "myopic_closed_form",
    "simulate",
    "solve_rvi",
    "solve_structured",
    "sweep",
    "tabulate",
    "transitions",
    "__version__",
]
