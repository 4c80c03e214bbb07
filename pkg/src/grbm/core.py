"""Shared domain types: subintervals, solver configuration, roots and reports."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

MACHINE_EPS = 2.22e-16
DEFAULT_MAX_EVALUATIONS = 10_000_000


class GRBMError(Exception):
    """Base class for errors raised by the root finders."""


class NonFiniteValue(GRBMError, ValueError):
    """The objective returned an infinity, a NaN or a non-real value."""

    def __init__(self, x: float, value: object):
        super().__init__(f"objective is not finite at x={x!r}: {value!r}")
        self.x = x
        self.value = value


class BudgetExceeded(GRBMError, RuntimeError):
    """The evaluation budget of a counted objective was used up."""

    def __init__(self, budget: int, phase: Optional[str] = None):
        msg = f"evaluation budget of {budget} exhausted"
        if phase:
            msg += f" during {phase}"
        super().__init__(msg)
        self.budget = budget
        self.phase = phase


class DivisionDegenerate(GRBMError, ZeroDivisionError):
    pass


class ConfigError(GRBMError, ValueError):
    pass


class RootKind(str, enum.Enum):
    BRACKETED = "Bracketed"
    EVEN_MULTIPLE = "EvenMultiple"
    # |f| fell below eps_f but the derivative test rejected the even-multiple label
    NEAR_ZERO = "NearZero"


class Termination(str, enum.Enum):
    WORKLIST_EXHAUSTED = "WorklistExhausted"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class TracePoint:
    x: float
    fx: float
    ht: Optional[float] = None


class CountedObjective:
    """Wrap a scalar function, counting every call and optionally tracing it.

    ``max_evaluations`` is a hard budget: the call that would exceed it raises
    :class:`BudgetExceeded` without invoking the function.
    """

    def __init__(
        self,
        func: Callable[[float], float],
        *,
        trace: bool = False,
        max_evaluations: Optional[int] = None,
    ):
        self.func = func
        self.evaluation_count = 0
        self.max_evaluations = max_evaluations
        self.trace: Optional[list[TracePoint]] = [] if trace else None

    def __call__(self, x: float, ht: Optional[float] = None) -> float:
        if self.max_evaluations is not None and self.evaluation_count >= self.max_evaluations:
            raise BudgetExceeded(self.max_evaluations)
        self.evaluation_count += 1
        fx = self.func(x)
        try:
            fx = float(fx)
        except (TypeError, ValueError):
            raise NonFiniteValue(x, fx) from None
        if not math.isfinite(fx):
            raise NonFiniteValue(x, fx)
        if self.trace is not None:
            self.trace.append(TracePoint(x, fx, ht))
        return fx


class CountedDerivative:
    """Counter for derivative calls; kept apart from the objective's count."""

    def __init__(self, func: Callable[[float], float]):
        self.func = func
        self.evaluation_count = 0

    def __call__(self, x: float) -> float:
        self.evaluation_count += 1
        d = float(self.func(x))
        if not math.isfinite(d):
            raise NonFiniteValue(x, d)
        return d


def central_difference(
    func: Callable[[float], float], machine_eps: float = MACHINE_EPS
) -> Callable[[float], float]:
    """Return a finite-difference derivative of ``func``.

    Used as the derivative for the even-multiple test when no symbolic
    derivative is available. The step is ``max(eps**(1/3), 1e-8) * max(1, |x|)``.
    """
    base = max(machine_eps ** (1.0 / 3.0), 1e-8)

    def derivative(x: float) -> float:
        h = base * max(1.0, abs(x))
        return (func(x + h) - func(x - h)) / (2.0 * h)

    return derivative


@dataclass(frozen=True)
class Subinterval:
    x_left: float
    x_right: float
    f_left: float
    f_right: float

    @property
    def width(self) -> float:
        return self.x_right - self.x_left

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.x_left + self.x_right)


def make_subinterval(
    a: float,
    b: float,
    objective: Callable[[float], float],
    f_a: Optional[float] = None,
    f_b: Optional[float] = None,
) -> Subinterval:
    """Build a subinterval over ``[a, b]``, evaluating only the missing endpoints."""
    if not a < b:
        raise ValueError(f"subinterval needs a < b, got [{a!r}, {b!r}]")
    if f_a is None:
        f_a = objective(a)
    if f_b is None:
        f_b = objective(b)
    for x, fx in ((a, f_a), (b, f_b)):
        if not math.isfinite(fx):
            raise NonFiniteValue(x, fx)
    return Subinterval(a, b, f_a, f_b)


def closeness_index(bound_width: float, min_root_separation: float) -> float:
    """Width of the search bound divided by the smallest root separation."""
    if min_root_separation == 0:
        raise DivisionDegenerate("minimum root separation is zero")
    if bound_width <= 0 or min_root_separation < 0:
        raise ValueError("closeness_index needs positive arguments")
    return bound_width / min_root_separation


@dataclass(frozen=True)
class SolverConfig:
    """Tunables of the adaptive solver.

    Attributes:
        C: scale of the halving threshold.
        eps: tolerance relative to the width of a bracketing interval.
        eps_m: cap on the tolerance.
        eps_f: near-zero threshold on ``|f|``; must not be below ``machine_eps``.
        eps_d: near-zero threshold on ``|f'|`` for the even-multiple test.
        n_exponent: power applied to the width in the halving threshold.
        max_evaluations: objective evaluation budget.
        even_detection: run the near-zero check on non-bracketing midpoints.
    """

    C: float = 0.04
    eps: float = 1e-2
    eps_m: float = 1e-3
    eps_f: float = MACHINE_EPS
    eps_d: float = MACHINE_EPS
    n_exponent: float = 1.0
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS
    machine_eps: float = MACHINE_EPS
    even_detection: bool = True

    def __post_init__(self):
        if not self.machine_eps > 0:
            raise ConfigError("machine_eps must be positive")
        for name in ("C", "eps", "eps_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a positive finite number, got {value!r}")
        if self.eps_f < self.machine_eps:
            raise ConfigError(
                f"eps_f={self.eps_f!r} is below machine epsilon {self.machine_eps!r}"
            )
        if self.eps_d < 0:
            raise ConfigError("eps_d must be nonnegative")
        if not self.n_exponent >= 1:
            raise ConfigError(f"n_exponent must be >= 1, got {self.n_exponent!r}")
        if int(self.max_evaluations) != self.max_evaluations or self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be a positive integer")


@dataclass(frozen=True)
class Root:
    location: float
    error_bound: float
    kind: RootKind = RootKind.BRACKETED

    def to_dict(self) -> dict:
        return {"location": self.location, "error_bound": self.error_bound, "kind": self.kind.value}

    @classmethod
    def from_dict(cls, d: dict) -> "Root":
        return cls(float(d["location"]), float(d["error_bound"]), RootKind(d["kind"]))


@dataclass
class SolveReport:
    roots: list[Root]
    evaluations: int
    derivative_evaluations: int = 0
    terminated_by: Termination = Termination.WORKLIST_EXHAUSTED
    trace: Optional[list[TracePoint]] = None
    # which stage ran out of budget, for multi-stage solves
    exceeded_phase: Optional[str] = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "roots": [r.to_dict() for r in self.roots],
            "evaluations": self.evaluations,
            "derivative_evaluations": self.derivative_evaluations,
            "terminated_by": self.terminated_by.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SolveReport":
        return cls(
            roots=[Root.from_dict(r) for r in d["roots"]],
            evaluations=int(d["evaluations"]),
            derivative_evaluations=int(d["derivative_evaluations"]),
            terminated_by=Termination(d["terminated_by"]),
        )


KIND_RANK = {RootKind.BRACKETED: 0, RootKind.EVEN_MULTIPLE: 1, RootKind.NEAR_ZERO: 2}


def _overlapping(a: Root, b: Root) -> bool:
    gap = abs(b.location - a.location)
    # hits a few ulps apart are the same root even when their bounds are ~0
    return gap < a.error_bound + b.error_bound or gap <= 16 * MACHINE_EPS * max(1.0, abs(a.location))


def merge_roots(roots: list[Root]) -> list[Root]:
    """Sort roots and collapse overlapping enclosures.

    Of two overlapping roots the more specific kind survives (bracketed, then
    even-multiple, then near-zero); within a kind the smaller error bound wins.
    """
    merged: list[Root] = []
    for root in sorted(roots, key=lambda r: r.location):
        if merged and _overlapping(merged[-1], root):
            prev = merged[-1]
            if (KIND_RANK[root.kind], root.error_bound) < (KIND_RANK[prev.kind], prev.error_bound):
                merged[-1] = root
            continue
        merged.append(root)
    return merged
