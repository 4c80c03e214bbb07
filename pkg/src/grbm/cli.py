"""Command-line front end.

Examples::

    grbm --preset eq5 --mode amr -C 0.04 --eps 1e-2 --eps-m 1e-3
    grbm --preset eq5 --mode static --ht 1e-5 --eps-s 1e-6
    grbm --function "x-0.5" --domain 0 1 --json
    grbm --preset eq10 --mode two-phase --p1-n 5 --p1-C 0.1 --p2-C 0.01 --derivative

Exit status: 0 on success, 2 on a parse or configuration error, 3 when the
evaluation budget ran out (the roots found so far are still printed).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, TextIO

from .amr import find_roots
from .core import (
    DEFAULT_MAX_EVALUATIONS,
    MACHINE_EPS,
    ConfigError,
    GRBMError,
    SolveReport,
    SolverConfig,
    Termination,
)
from .expr import ExprError, compile_expr, differentiate, parse
from .presets import PRESETS
from .static import StaticConfig, static_find_roots
from .strategies import TwoPhaseConfig, two_phase_solve

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 2, 3


@dataclass
class RunSpec:
    function_text: str
    domain: tuple[float, float]
    mode: str = "amr"
    solver: SolverConfig = field(default_factory=SolverConfig)
    static: StaticConfig = field(default_factory=StaticConfig)
    two_phase: TwoPhaseConfig = field(default_factory=TwoPhaseConfig)
    use_derivative: bool = False
    output: str = "table"
    trace_path: Optional[str] = None
    preset: Optional[str] = None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grbm", description="Find all real roots of f(x) on [a, b].")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--function", help="objective in x, e.g. '(x-1)*(x-2)^2'")
    src.add_argument("--preset", choices=sorted(PRESETS), help="built-in benchmark objective")
    p.add_argument("--domain", nargs=2, type=float, metavar=("A", "B"))
    p.add_argument("--mode", choices=("amr", "static", "two-phase"), default="amr")

    p.add_argument("-C", dest="C", type=float, default=0.04)
    p.add_argument("--eps", type=float, default=1e-2)
    p.add_argument("--eps-m", type=float, default=1e-3)
    p.add_argument("--eps-f", type=float, default=MACHINE_EPS)
    p.add_argument("--eps-d", type=float, default=MACHINE_EPS)
    p.add_argument("-n", dest="n", type=float, default=1.0)
    p.add_argument("--no-even-detection", action="store_true", help="skip the near-zero midpoint check")
    p.add_argument("--derivative", action="store_true", help="use the symbolic derivative in the even-root test")

    p.add_argument("--ht", type=float, default=1e-5)
    p.add_argument("--eps-s", type=float, default=1e-6)

    p.add_argument("--p1-C", type=float, default=0.1)
    p.add_argument("--p1-eps", type=float, default=1e-5)
    p.add_argument("--p1-eps-m", type=float, default=1e-5)
    p.add_argument("--p1-n", type=float, default=3.0)
    p.add_argument("--p2-C", type=float, default=0.01)
    p.add_argument("--p2-eps", type=float, default=1e-5)
    p.add_argument("--p2-eps-m", type=float, default=1e-5)
    p.add_argument("--exclusion-factor", type=float, default=10.0)

    p.add_argument("--max-evals", type=int, default=DEFAULT_MAX_EVALUATIONS)
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--trace", metavar="PATH", help="write every evaluation as CSV")
    return p


def spec_from_args(args: argparse.Namespace) -> RunSpec:
    if args.preset:
        preset = PRESETS[args.preset]
        text = preset.text
        domain = tuple(args.domain) if args.domain else preset.domain
    else:
        if not args.domain:
            raise ConfigError("--domain is required with --function")
        text, domain = args.function, tuple(args.domain)
    shared = dict(eps_f=args.eps_f, eps_d=args.eps_d, max_evaluations=args.max_evals)
    return RunSpec(
        function_text=text,
        domain=domain,
        mode=args.mode,
        solver=SolverConfig(
            C=args.C, eps=args.eps, eps_m=args.eps_m, n_exponent=args.n,
            even_detection=not args.no_even_detection, **shared,
        ),
        static=StaticConfig(ht=args.ht, eps_s=args.eps_s, max_evaluations=args.max_evals),
        two_phase=TwoPhaseConfig(
            phase1=SolverConfig(C=args.p1_C, eps=args.p1_eps, eps_m=args.p1_eps_m, n_exponent=args.p1_n,
                                even_detection=False, **shared),
            phase2=SolverConfig(C=args.p2_C, eps=args.p2_eps, eps_m=args.p2_eps_m, **shared),
            exclusion_factor=args.exclusion_factor,
        ),
        use_derivative=args.derivative,
        output="json" if args.json else "table",
        trace_path=args.trace,
        preset=args.preset,
    )


def solve(spec: RunSpec) -> SolveReport:
    a, b = spec.domain
    if not a < b:
        raise ConfigError(f"domain must satisfy A < B, got {a} {b}")
    tree = parse(spec.function_text)
    f = compile_expr(tree)
    df = compile_expr(differentiate(tree)) if spec.use_derivative else None
    tracing = spec.trace_path is not None
    if spec.mode == "amr":
        return find_roots(f, a, b, spec.solver, df, trace=tracing)
    if spec.mode == "static":
        return static_find_roots(f, a, b, spec.static, trace=tracing)
    if spec.mode == "two-phase":
        return two_phase_solve(f, a, b, spec.two_phase, df, trace=tracing)
    raise ConfigError(f"unknown mode {spec.mode!r}")


def format_table(report: SolveReport) -> str:
    lines = [f"{r.location:.12g} ± {r.error_bound:.3g} [{r.kind.value}]" for r in report.roots]
    if not lines:
        lines.append("no roots found")
    lines += [
        f"roots: {len(report.roots)}",
        f"evaluations: {report.evaluations}",
        f"derivative evaluations: {report.derivative_evaluations}",
        f"terminated by: {report.terminated_by.value}",
    ]
    if report.exceeded_phase:
        lines.append(f"budget exhausted in: {report.exceeded_phase}")
    return "\n".join(lines)


def format_json(report: SolveReport) -> str:
    return json.dumps(report.to_dict(), indent=2)


def write_trace(report: SolveReport, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["idx", "x", "fx", "ht"])
    for i, pt in enumerate(report.trace or (), start=1):
        writer.writerow([i, repr(pt.x), repr(pt.fx), "" if pt.ht is None else repr(pt.ht)])


def run(spec: RunSpec, stdout: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    report = solve(spec)
    if spec.trace_path:
        with open(spec.trace_path, "w", newline="") as fh:
            write_trace(report, fh)
    print(format_json(report) if spec.output == "json" else format_table(report), file=stdout)
    return EXIT_BUDGET if report.terminated_by is Termination.BUDGET_EXCEEDED else EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
        return run(spec)
    except (GRBMError, ExprError) as exc:
        print(f"grbm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
