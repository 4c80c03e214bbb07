"""Global root bracketing with adaptive mesh refinement.

A FIFO worklist of subintervals is processed one at a time. Bracketing
subintervals are bisected down to an adaptive tolerance; non-bracketing ones
are tested for a near-zero midpoint (even-multiple roots) and otherwise
halved while they are wider than the adaptive halving threshold.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from typing import Callable, Iterator, Optional

from .core import (
    KIND_RANK,
    BudgetExceeded,
    CountedDerivative,
    CountedObjective,
    NonFiniteValue,
    Root,
    RootKind,
    SolveReport,
    SolverConfig,
    Subinterval,
    Termination,
    make_subinterval,
    merge_roots,
)


class Check(enum.Enum):
    EVEN_MULTIPLE_ROOT = "EvenMultipleRoot"
    NEAR_ZERO_ROOT = "NearZeroRoot"
    NOT_ROOT = "NotRoot"


def halving_threshold(sub: Subinterval, C: float, n: float = 1.0) -> float:
    """``C * min(|f_left|, |f_right|) / width**n``."""
    return C * min(abs(sub.f_left), abs(sub.f_right)) / sub.width**n


def adaptive_tolerance(L: float, eps: float, eps_m: float) -> float:
    return min(eps * L, eps_m)


def is_bracketing(sub: Subinterval) -> bool:
    return sub.f_left * sub.f_right < 0


def even_root_check(
    x: float,
    objective: Callable[[float], float],
    derivative: Optional[Callable[[float], float]],
    eps_f: float,
    eps_d: float,
    fx: Optional[float] = None,
) -> Check:
    """Classify ``x`` by the size of ``f(x)`` and, if given, ``f'(x)``.

    ``fx`` may carry an already computed ``f(x)`` to avoid re-evaluation.
    """
    if fx is None:
        fx = objective(x)
    if not math.isfinite(fx):
        raise NonFiniteValue(x, fx)
    if abs(fx) >= eps_f:
        return Check.NOT_ROOT
    if derivative is None:
        return Check.NEAR_ZERO_ROOT
    dfx = derivative(x)
    if not math.isfinite(dfx):
        raise NonFiniteValue(x, dfx)
    return Check.EVEN_MULTIPLE_ROOT if abs(dfx) < eps_d else Check.NEAR_ZERO_ROOT


class Worklist:
    """FIFO of pending subintervals.

    ``enqueued`` counts every push and ``processed``
    every pop; the loop runs while ``processed < enqueued``.
    """

    def __init__(self, initial: Iterator[Subinterval] = ()):
        self._pending: deque[Subinterval] = deque()
        self.enqueued = 0
        self.processed = 0
        for sub in initial:
            self.push(sub)

    def push(self, sub: Subinterval) -> None:
        if not sub.x_left < sub.x_right:
            raise ValueError("zero-width subinterval")
        self._pending.append(sub)
        self.enqueued += 1

    def pop(self) -> Subinterval:
        sub = self._pending.popleft()
        self.processed += 1
        return sub

    def pending(self) -> list[Subinterval]:
        return list(self._pending)

    def __len__(self) -> int:
        return len(self._pending)

    def __bool__(self) -> bool:
        return bool(self._pending)


def _can_halve(sub: Subinterval, machine_eps: float) -> bool:
    if sub.width < machine_eps * max(1.0, abs(sub.x_left)):
        return False
    m = sub.midpoint
    return sub.x_left < m < sub.x_right


class _Bisection:
    """State of one bracketing bisection, kept so a budget stop can still report it."""

    def __init__(self, sub: Subinterval):
        self.sub = sub

    def as_root(self) -> Root:
        sub = self.sub
        loc = sub.midpoint
        return Root(loc, max(loc - sub.x_left, sub.x_right - loc), RootKind.BRACKETED)


def bisect_refine(
    sub: Subinterval,
    cfg: SolverConfig,
    worklist: Worklist,
    objective: Callable[..., float],
    f_mid: Optional[float] = None,
    _state: Optional[_Bisection] = None,
) -> Root:
    """Bisect a bracketing subinterval down to the adaptive tolerance.

    At every step the half without a sign change is pushed back onto the
    worklist when it is wider than its own halving threshold. A midpoint where
    ``f`` is exactly zero ends the loop with a zero-width root. ``f_mid`` may
    hold an already known value at the midpoint of ``sub``.
    """
    if not is_bracketing(sub):
        raise ValueError("bisect_refine needs a bracketing subinterval")
    state = _state or _Bisection(sub)
    state.sub = sub
    tol = adaptive_tolerance(sub.width, cfg.eps, cfg.eps_m)
    while sub.width > tol:
        m = sub.midpoint
        if not sub.x_left < m < sub.x_right:
            break
        fm = objective(m) if f_mid is None else f_mid
        f_mid = None
        left = Subinterval(sub.x_left, m, sub.f_left, fm)
        right = Subinterval(m, sub.x_right, fm, sub.f_right)
        if fm == 0.0:
            # exact root; neither half is known to bracket, so both are treated as discarded
            for half in (left, right):
                if half.width > halving_threshold(half, cfg.C, cfg.n_exponent):
                    worklist.push(half)
            return Root(m, 0.0, RootKind.BRACKETED)
        if is_bracketing(left):
            sub, other = left, right
        else:
            sub, other = right, left
        state.sub = sub
        if other.width > halving_threshold(other, cfg.C, cfg.n_exponent):
            worklist.push(other)
    return state.as_root()


def merge_near_zero_bands(
    roots: list[Root], objective: Callable[[float], float], eps_f: float
) -> list[Root]:
    """Collapse neighbouring near-zero hits that lie in one band where ``|f| < eps_f``.

    Two adjacent point-like roots (non-bracketed hits, or exact zeros with a
    zero bound) belong to the same band when ``f`` at the point halfway between
    them is still below ``eps_f``; that probe costs one evaluation. The band is
    represented by its most specific kind, then the smallest bound.
    """

    def point_like(r: Root) -> bool:
        return r.kind is not RootKind.BRACKETED or r.error_bound == 0.0

    out: list[Root] = []
    for root in roots:
        prev = out[-1] if out else None
        if (
            prev is not None
            and point_like(prev)
            and point_like(root)
            and abs(objective(0.5 * (prev.location + root.location))) < eps_f
        ):
            out[-1] = min(prev, root, key=lambda r: (KIND_RANK[r.kind], r.error_bound))
            continue
        out.append(root)
    return out


def find_roots(
    objective: Callable[[float], float] | CountedObjective,
    a: float,
    b: float,
    cfg: SolverConfig = SolverConfig(),
    derivative: Optional[Callable[[float], float]] = None,
    *,
    trace: bool = False,
) -> SolveReport:
    """Locate every root of ``objective`` on ``[a, b]``.

    With a ``derivative``, a near-zero midpoint is labelled even-multiple only
    when ``|f'|`` is also below ``eps_d``; otherwise the subinterval keeps being
    halved and the point is reported as a plain near-zero root only if no
    further halving is possible.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
    if isinstance(objective, CountedObjective):
        f = objective
        start = f.evaluation_count
    else:
        f = CountedObjective(objective, trace=trace, max_evaluations=cfg.max_evaluations)
        start = 0
    df = CountedDerivative(derivative) if derivative is not None else None

    roots: list[Root] = []
    worklist = Worklist()
    terminated = Termination.WORKLIST_EXHAUSTED
    active: Optional[_Bisection] = None
    try:
        worklist.push(make_subinterval(a, b, f))
        while worklist:
            sub = worklist.pop()
            if is_bracketing(sub):
                active = _Bisection(sub)
                roots.append(bisect_refine(sub, cfg, worklist, f, _state=active))
                active = None
                continue
            ht = halving_threshold(sub, cfg.C, cfg.n_exponent)
            halvable = _can_halve(sub, cfg.machine_eps)
            wants_halving = halvable and sub.width > ht
            if not cfg.even_detection and not wants_halving:
                continue
            m = sub.midpoint
            if not sub.x_left < m < sub.x_right:
                continue
            fm = f(m, ht)
            half = 0.5 * sub.width
            if cfg.even_detection:
                check = even_root_check(m, f, df, cfg.eps_f, cfg.eps_d, fx=fm)
                if fm == 0.0:
                    # an exact zero is its own enclosure; a wide bound here would
                    # swallow neighbouring roots at dedup, so keep searching both halves
                    kind = RootKind.NEAR_ZERO if check is Check.NEAR_ZERO_ROOT and df is not None else RootKind.EVEN_MULTIPLE
                    roots.append(Root(m, 0.0, kind))
                elif check is Check.EVEN_MULTIPLE_ROOT or (check is Check.NEAR_ZERO_ROOT and df is None):
                    roots.append(Root(m, half, RootKind.EVEN_MULTIPLE))
                    continue
                elif check is Check.NEAR_ZERO_ROOT and not wants_halving:
                    roots.append(Root(m, half, RootKind.NEAR_ZERO))
                    continue
            if wants_halving:
                worklist.push(Subinterval(sub.x_left, m, sub.f_left, fm))
                worklist.push(Subinterval(m, sub.x_right, fm, sub.f_right))
    except BudgetExceeded:
        terminated = Termination.BUDGET_EXCEEDED
        if active is not None:
            roots.append(active.as_root())

    roots = merge_roots(roots)
    if terminated is Termination.WORKLIST_EXHAUSTED:
        try:
            roots = merge_near_zero_bands(roots, f, cfg.eps_f)
        except BudgetExceeded:
            terminated = Termination.BUDGET_EXCEEDED

    return SolveReport(
        roots=roots,
        evaluations=f.evaluation_count - start,
        derivative_evaluations=df.evaluation_count if df is not None else 0,
        terminated_by=terminated,
        trace=list(f.trace) if f.trace is not None else None,
        details={"subintervals": worklist.enqueued},
    )
