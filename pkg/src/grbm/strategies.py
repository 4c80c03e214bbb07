"""Two-phase solving for functions that mix multiple and simple roots.

Phase 1 runs with a halving exponent above one and without the near-zero
check, which picks up odd-multiple roots cheaply. Neighbourhoods of those
roots are then cut out and phase 2 searches the rest with exponent one and
even-multiple detection switched back on.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .amr import find_roots
from .core import (
    BudgetExceeded,
    ConfigError,
    CountedObjective,
    Root,
    SolveReport,
    SolverConfig,
    Termination,
    merge_roots,
)


@dataclass(frozen=True)
class ExclusionRegion:
    center: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("exclusion radius must be positive")

    @property
    def lo(self) -> float:
        return self.center - self.radius

    @property
    def hi(self) -> float:
        return self.center + self.radius


@dataclass(frozen=True)
class TwoPhaseConfig:
    """Settings for :func:`two_phase_solve`.

    ``edge_rel_floor`` controls how far a region is widened: its radius keeps
    doubling while ``|f|`` at either edge is below ``edge_rel_floor`` times the
    larger ``|f|`` at the ends of the search domain. Widening stops early at a
    sign change so that no unexplored root is swallowed. Set it to 0 to keep
    the plain ``exclusion_factor`` radius.
    """

    phase1: SolverConfig = field(
        default_factory=lambda: SolverConfig(C=0.1, eps=1e-5, eps_m=1e-5, n_exponent=3.0, even_detection=False)
    )
    phase2: SolverConfig = field(default_factory=lambda: SolverConfig(C=0.01, eps=1e-5, eps_m=1e-5))
    exclusion_factor: float = 10.0
    edge_rel_floor: float = 1e-6

    def __post_init__(self):
        if self.phase1.n_exponent <= 1:
            raise ConfigError("phase 1 needs n_exponent > 1")
        if self.phase2.n_exponent != 1:
            raise ConfigError("phase 2 needs n_exponent = 1")
        if not self.exclusion_factor > 1:
            raise ConfigError("exclusion_factor must exceed 1")
        if self.edge_rel_floor < 0:
            raise ConfigError("edge_rel_floor must be nonnegative")


def exclusion_complement(a: float, b: float, regions: list[ExclusionRegion]) -> list[tuple[float, float]]:
    """Maximal pieces of ``[a, b]`` that avoid the interior of every region."""
    spans = sorted((max(a, r.lo), min(b, r.hi)) for r in regions if r.hi > a and r.lo < b)
    pieces: list[tuple[float, float]] = []
    cursor = a
    for lo, hi in spans:
        if lo > cursor:
            pieces.append((cursor, lo))
        cursor = max(cursor, hi)
    if cursor < b:
        pieces.append((cursor, b))
    return pieces


def _widen(
    f: Callable[[float], float],
    root: Root,
    radius: float,
    a: float,
    b: float,
    floor: float,
    refine_steps: int = 8,
) -> float:
    """Grow ``radius`` until both edges leave the flat band around ``root``.

    The radius doubles until ``|f|`` at the edge reaches ``floor`` and is then
    bisected back (``refine_steps`` evaluations) towards the smallest such radius.
    """
    if floor <= 0:
        return radius
    for side in (-1.0, 1.0):
        edge = root.location + side * radius
        if not a < edge < b:
            continue
        f_edge = f(edge)
        inner = None
        while abs(f_edge) < floor:
            wider = root.location + side * 2.0 * radius
            if not a < wider < b:
                radius *= 2.0
                break
            f_wider = f(wider)
            if f_wider * f_edge < 0:
                break
            inner = radius
            radius *= 2.0
            f_edge = f_wider
        else:
            if inner is not None:
                outer = radius
                for _ in range(refine_steps):
                    mid = 0.5 * (inner + outer)
                    if abs(f(root.location + side * mid)) < floor:
                        inner = mid
                    else:
                        outer = mid
                radius = outer
    return radius


def _absorb(into: SolveReport, part: SolveReport) -> None:
    into.roots.extend(part.roots)
    into.evaluations += part.evaluations
    into.derivative_evaluations += part.derivative_evaluations
    if into.trace is not None and part.trace is not None:
        into.trace.extend(part.trace)


def _absorb_probe(into: SolveReport, probe: CountedObjective) -> None:
    into.evaluations += probe.evaluation_count
    if into.trace is not None and probe.trace is not None:
        into.trace.extend(probe.trace)


def two_phase_solve(
    objective: Callable[[float], float],
    a: float,
    b: float,
    cfg: TwoPhaseConfig = TwoPhaseConfig(),
    derivative: Optional[Callable[[float], float]] = None,
    *,
    trace: bool = False,
) -> SolveReport:
    """Find odd-multiple roots first, exclude them, then search the remainder.

    The report's ``details`` hold each phase's evaluation counts and the
    phase-2 subdomains. When a phase exhausts its budget the report is marked
    ``BudgetExceeded`` with ``exceeded_phase`` naming that phase. A trace,
    when requested, lists phase 1, the widening probes and phase 2 in order.
    """
    if not a < b:
        raise ValueError(f"need a < b, got [{a!r}, {b!r}]")
    phase1_cfg = replace(cfg.phase1, even_detection=False)
    report = SolveReport(roots=[], evaluations=0, trace=[] if trace else None)

    first = find_roots(objective, a, b, phase1_cfg, trace=trace)
    _absorb(report, first)
    report.details["phase1_evaluations"] = first.evaluations
    if first.terminated_by is Termination.BUDGET_EXCEEDED:
        report.terminated_by = Termination.BUDGET_EXCEEDED
        report.exceeded_phase = "phase1"
        report.roots = merge_roots(report.roots)
        return report

    # widening probes are charged to phase 2's budget
    probe = CountedObjective(objective, trace=trace, max_evaluations=cfg.phase2.max_evaluations)
    regions: list[ExclusionRegion] = []
    try:
        if first.roots:
            floor = cfg.edge_rel_floor * max(abs(probe(a)), abs(probe(b)))
            for root in first.roots:
                radius = cfg.exclusion_factor * max(root.error_bound, cfg.phase2.eps_m)
                radius = _widen(probe, root, radius, a, b, floor)
                regions.append(ExclusionRegion(root.location, radius))
    except BudgetExceeded:
        _absorb_probe(report, probe)
        report.terminated_by = Termination.BUDGET_EXCEEDED
        report.exceeded_phase = "phase2"
        report.roots = merge_roots(report.roots)
        return report
    domains = exclusion_complement(a, b, regions)
    _absorb_probe(report, probe)
    report.details["regions"] = regions
    report.details["phase2_domains"] = domains

    phase2_evals = probe.evaluation_count
    remaining = cfg.phase2.max_evaluations - probe.evaluation_count
    for lo, hi in domains:
        if remaining <= 0:
            report.terminated_by = Termination.BUDGET_EXCEEDED
            report.exceeded_phase = "phase2"
            break
        second = find_roots(
            objective, lo, hi, replace(cfg.phase2, max_evaluations=remaining), derivative, trace=trace
        )
        _absorb(report, second)
        phase2_evals += second.evaluations
        remaining -= second.evaluations
        if second.terminated_by is Termination.BUDGET_EXCEEDED:
            report.terminated_by = Termination.BUDGET_EXCEEDED
            report.exceeded_phase = "phase2"
            break
    report.details["phase2_evaluations"] = phase2_evals
    report.roots = merge_roots(report.roots)
    return report
