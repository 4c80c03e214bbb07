"""All real roots of a univariate function on a bounded interval.

Adaptive global root bracketing: subintervals are halved while they are wider
than a threshold that shrinks where ``|f|`` is small, bracketing subintervals
are bisected to a tolerance that tightens for closely spaced roots, and
even-multiple roots are caught where ``|f|`` (and optionally ``|f'|``)
vanishes at a midpoint.
"""

from .amr import (
    Check,
    Worklist,
    adaptive_tolerance,
    bisect_refine,
    even_root_check,
    find_roots,
    halving_threshold,
    is_bracketing,
)
from .core import (
    MACHINE_EPS,
    BudgetExceeded,
    ConfigError,
    CountedObjective,
    DivisionDegenerate,
    GRBMError,
    NonFiniteValue,
    Root,
    RootKind,
    SolveReport,
    SolverConfig,
    Subinterval,
    Termination,
    central_difference,
    closeness_index,
    make_subinterval,
)
from .static import StaticConfig, classic_bisection, static_find_roots, uniform_scan
from .strategies import ExclusionRegion, TwoPhaseConfig, exclusion_complement, two_phase_solve

__all__ = [
    "MACHINE_EPS",
    "BudgetExceeded",
    "Check",
    "ConfigError",
    "CountedObjective",
    "DivisionDegenerate",
    "ExclusionRegion",
    "GRBMError",
    "NonFiniteValue",
    "Root",
    "RootKind",
    "SolveReport",
    "SolverConfig",
    "StaticConfig",
    "Subinterval",
    "Termination",
    "TwoPhaseConfig",
    "Worklist",
    "adaptive_tolerance",
    "bisect_refine",
    "central_difference",
    "classic_bisection",
    "closeness_index",
    "even_root_check",
    "exclusion_complement",
    "find_roots",
    "halving_threshold",
    "is_bracketing",
    "make_subinterval",
    "static_find_roots",
    "two_phase_solve",
    "uniform_scan",
]
