"""Baseline global bracketing on a uniform mesh, with classic bisection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .core import (
    BudgetExceeded,
    ConfigError,
    CountedObjective,
    MACHINE_EPS,
    Root,
    RootKind,
    SolveReport,
    Subinterval,
    Termination,
    merge_roots,
)


@dataclass(frozen=True)
class StaticConfig:
    ht: float = 1e-5
    eps_s: float = 1e-6
    max_evaluations: int = 10_000_000

    def __post_init__(self):
        if not (math.isfinite(self.ht) and self.ht > 0):
            raise ConfigError(f"ht must be positive, got {self.ht!r}")
        if not self.eps_s >= MACHINE_EPS:
            raise ConfigError(f"eps_s must be at least machine epsilon, got {self.eps_s!r}")


def mesh_nodes(a: float, b: float, ht: float) -> list[float]:
    """Nodes ``a, a + ht, ...`` ending exactly at ``b``; the last cell may be short."""
    cells = math.ceil((b - a) / ht)
    # (b - a) / ht can land a hair above an integer
    if cells > 1 and (cells - 1) * ht >= (b - a) * (1 - 1e-12):
        cells -= 1
    return [a + k * ht for k in range(cells)] + [b]


def _scan(objective, a: float, b: float, cfg: StaticConfig):
    xs = mesh_nodes(a, b, cfg.ht)
    fs = [objective(x) for x in xs]
    brackets: list[Subinterval] = []
    zeros = [x for x, fx in zip(xs, fs) if fx == 0.0]
    for k in range(len(xs) - 1):
        xl, xr, fl, fr = xs[k], xs[k + 1], fs[k], fs[k + 1]
        if fl * fr < 0:
            brackets.append(Subinterval(xl, xr, fl, fr))
        elif (fl == 0.0) != (fr == 0.0):
            # a zero node hides the sign of its cell; one interior probe recovers it
            m = 0.5 * (xl + xr)
            fm = objective(m)
            if fr == 0.0 and fl * fm < 0:
                brackets.append(Subinterval(xl, m, fl, fm))
            elif fl == 0.0 and fm * fr < 0:
                brackets.append(Subinterval(m, xr, fm, fr))
    return brackets, zeros


def uniform_scan(objective: Callable[[float], float], a: float, b: float, cfg: StaticConfig) -> list[Subinterval]:
    """Evaluate ``f`` on the uniform mesh and return every cell with a strict sign change.

    A node where ``f`` is exactly zero does not produce a bracket;
    :func:`static_find_roots` reports such nodes as roots directly. Each cell
    next to such a node costs one extra evaluation at its midpoint, and the
    half facing the nonzero end is returned when it changes sign.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
    return _scan(objective, a, b, cfg)[0]


def classic_bisection(sub: Subinterval, cfg: StaticConfig, objective: Callable[[float], float]) -> Root:
    """Plain bisection stopped by the relative change of successive midpoints.

    Stops when ``|m_new - m_old| / max(1, |m_new|) < eps_s`` or when ``f`` is
    exactly zero at a midpoint.
    """
    if not sub.f_left * sub.f_right < 0:
        raise ValueError("classic_bisection needs a bracketing subinterval")
    xl, xr, fl = sub.x_left, sub.x_right, sub.f_left
    m_old: Optional[float] = None
    while True:
        m = 0.5 * (xl + xr)
        if not xl < m < xr:
            break
        fm = objective(m)
        if fm == 0.0:
            return Root(m, 0.0, RootKind.BRACKETED)
        if fl * fm < 0:
            xr = m
        else:
            xl, fl = m, fm
        if m_old is not None and abs(m - m_old) / max(1.0, abs(m)) < cfg.eps_s:
            break
        m_old = m
    loc = 0.5 * (xl + xr)
    return Root(loc, max(loc - xl, xr - loc), RootKind.BRACKETED)


def static_find_roots(
    objective: Callable[[float], float], a: float, b: float, cfg: StaticConfig = StaticConfig(), *, trace: bool = False
) -> SolveReport:
    """Uniform-mesh scan followed by bisection of every bracketing cell."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
    f = CountedObjective(objective, trace=trace, max_evaluations=cfg.max_evaluations)
    roots: list[Root] = []
    terminated = Termination.WORKLIST_EXHAUSTED
    try:
        brackets, zeros = _scan(f, a, b, cfg)
        roots.extend(Root(z, 0.0, RootKind.BRACKETED) for z in zeros)
        for sub in brackets:
            roots.append(classic_bisection(sub, cfg, f))
    except BudgetExceeded:
        terminated = Termination.BUDGET_EXCEEDED
    return SolveReport(
        roots=merge_roots(roots),
        evaluations=f.evaluation_count,
        terminated_by=terminated,
        trace=list(f.trace) if f.trace is not None else None,
    )
