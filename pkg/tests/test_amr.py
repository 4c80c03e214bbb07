import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grbm.amr import (
    Check,
    Worklist,
    adaptive_tolerance,
    bisect_refine,
    even_root_check,
    find_roots,
    halving_threshold,
    is_bracketing,
)
from grbm.core import (
    MACHINE_EPS,
    CountedObjective,
    NonFiniteValue,
    RootKind,
    SolverConfig,
    Subinterval,
    Termination,
    make_subinterval,
)
from conftest import certified, eq5_poly, grid_sign_changes


def sub_with(f_left, f_right, width):
    return Subinterval(0.0, width, f_left, f_right)


class TestHalvingThreshold:
    def test_linear_exponent(self):
        assert halving_threshold(sub_with(2.0, -6.0, 2.0), C=1.0) == 1.0

    def test_cubic_exponent(self):
        assert halving_threshold(sub_with(4.0, 9.0, 2.0), C=0.5, n=3) == 0.25

    def test_zero_endpoint(self):
        assert halving_threshold(sub_with(0.0, 5.0, 0.3), C=7.0) == 0.0

    @given(
        c=st.floats(1e-6, 1e3), dc=st.floats(1e-3, 10),
        fmin=st.floats(1e-6, 1e3), width=st.floats(1e-3, 0.999),
        n=st.floats(1.0, 6.0), dn=st.floats(0.01, 2.0),
    )
    def test_monotone_in_c_magnitude_and_exponent(self, c, dc, fmin, width, n, dn):
        base = halving_threshold(sub_with(fmin, 2 * fmin, width), c, n)
        assert halving_threshold(sub_with(fmin, 2 * fmin, width), c * (1 + dc), n) > base
        assert halving_threshold(sub_with(fmin * (1 + dc), 3 * fmin, width), c, n) > base
        assert halving_threshold(sub_with(fmin, 2 * fmin, width), c, n + dn) > base


class TestAdaptiveTolerance:
    @pytest.mark.parametrize(
        "L, eps, eps_m, expected",
        [(0.5, 1e-2, 1e-3, 1e-3), (1e-4, 1e-2, 1e-3, 1e-6), (2.0, 1e-4, 1e-5, 1e-5)],
    )
    def test_examples(self, L, eps, eps_m, expected):
        assert adaptive_tolerance(L, eps, eps_m) == pytest.approx(expected, rel=1e-15)

    @given(st.floats(1e-9, 1.0), st.floats(0.01, 0.99))
    def test_smaller_brackets_get_tighter_tolerance(self, l2_frac, ratio):
        eps, eps_m = 1e-2, 1e-3
        l2 = l2_frac * eps_m / eps
        l1 = l2 * ratio
        assert adaptive_tolerance(l1, eps, eps_m) < adaptive_tolerance(l2, eps, eps_m)


@pytest.mark.parametrize(
    "fl, fr, expected", [(-1.0, 2.0, True), (1.0, 2.0, False), (0.0, 2.0, False)]
)
def test_is_bracketing(fl, fr, expected):
    assert is_bracketing(sub_with(fl, fr, 1.0)) is expected


class TestEvenRootCheck:
    @staticmethod
    def g(x):
        return (x - 3) ** 2 * (x - 4) ** 2

    @staticmethod
    def dg(x):
        return 2 * (x - 3) * (x - 4) ** 2 + 2 * (x - 3) ** 2 * (x - 4)

    def test_even_multiple_with_derivative(self):
        assert even_root_check(3.0, self.g, self.dg, MACHINE_EPS, MACHINE_EPS) is Check.EVEN_MULTIPLE_ROOT

    def test_simple_root_fails_derivative_test(self):
        assert even_root_check(0.0, lambda x: x, lambda x: 1.0, MACHINE_EPS, MACHINE_EPS) is Check.NEAR_ZERO_ROOT

    def test_not_root(self):
        assert even_root_check(0.5, lambda x: x, None, 1e-12, 0.0) is Check.NOT_ROOT

    def test_without_derivative(self):
        assert even_root_check(3.0, self.g, None, MACHINE_EPS, MACHINE_EPS) is Check.NEAR_ZERO_ROOT

    def test_non_finite(self):
        with pytest.raises(NonFiniteValue):
            even_root_check(0.0, lambda x: 0.0, lambda x: math.inf, 1e-3, 1e-3)


class TestBisectRefine:
    def test_linear_9_3(self):
        f = CountedObjective(lambda x: x - 9.3)
        root = bisect_refine(make_subinterval(9.0, 10.0, f), SolverConfig(), Worklist(), f)
        assert root.kind is RootKind.BRACKETED
        assert root.error_bound <= 1e-3
        assert abs(root.location - 9.3) <= root.error_bound

    def test_monotone_discards_nothing(self):
        f = CountedObjective(lambda x: x)
        wl = Worklist()
        root = bisect_refine(make_subinterval(-1.0, 2.0, f), SolverConfig(C=10.0), wl, f)
        assert abs(root.location) <= root.error_bound <= 1e-3
        assert len(wl) == 0

    def test_requires_bracket(self):
        with pytest.raises(ValueError):
            bisect_refine(sub_with(1.0, 2.0, 1.0), SolverConfig(), Worklist(), lambda x: 1.0)

    def test_re_enqueued_halves_are_cache_coherent(self):
        def f(x):
            return (x - 0.25) * (x - 0.5) * (x - 0.75)

        wl = Worklist()
        bisect_refine(make_subinterval(0.0, 1.0, f), SolverConfig(), wl, f)
        assert len(wl) > 0
        for sub in wl.pending():
            assert sub.x_left < sub.x_right
            assert (f(sub.x_left), f(sub.x_right)) == (sub.f_left, sub.f_right)

    def test_cubic_three_roots_against_grid(self):
        def f(x):
            return (x - 0.25) * (x - 0.5) * (x - 0.75)

        oracle = grid_sign_changes(f, 0.0, 1.0)
        assert len(oracle) == 3
        report = find_roots(f, 0.0, 1.0, SolverConfig())
        locs = [r.location for r in report.roots]
        assert len(locs) == 3
        assert np.all(np.abs(np.array(locs) - oracle) <= 1e-3)


class TestFindRoots:
    def test_eq5_five_roots(self):
        report = find_roots(eq5_poly, 0.0, 10.0, SolverConfig(C=0.04, eps=1e-2, eps_m=1e-3))
        truth = [0.5, 0.50001, 4.0, 4.05, 9.3]
        assert len(report.roots) == 5
        for root, t in zip(report.roots, truth):
            assert abs(root.location - t) <= root.error_bound
        assert report.terminated_by is Termination.WORKLIST_EXHAUSTED

    def test_eq5_misses_close_pair_at_larger_c(self):
        report = find_roots(eq5_poly, 0.0, 10.0, SolverConfig(C=0.05, eps=1e-2, eps_m=1e-3))
        locs = [r.location for r in report.roots]
        assert len(locs) == 3
        assert locs == pytest.approx([4.0, 4.05, 9.3], abs=1e-3)

    def test_single_linear_root(self):
        report = find_roots(lambda x: x - 0.5, 0.0, 1.0)
        assert [r.location for r in report.roots] == [0.5]

    def test_eq7_even_multiple(self, eq7):
        g, _ = eq7
        report = find_roots(g, 0.0, 5.0, SolverConfig(C=4))
        assert [r.kind for r in report.roots] == [RootKind.EVEN_MULTIPLE] * 2
        assert [r.location for r in report.roots] == pytest.approx([3.0, 4.0], abs=1e-7)

    def test_eq7_derivative(self, eq7):
        g, dg = eq7
        report = find_roots(g, 0.0, 5.0, SolverConfig(C=4), dg)
        assert [r.kind for r in report.roots] == [RootKind.EVEN_MULTIPLE] * 2
        assert report.derivative_evaluations > 0

    def test_simple_root_with_derivative_is_bracketed(self):
        report = find_roots(lambda x: x - 0.3, 0.0, 1.0, derivative=lambda x: 1.0)
        assert [r.kind for r in report.roots] == [RootKind.BRACKETED]

    def test_trace_length_equals_count(self):
        report = find_roots(eq5_poly, 0.0, 10.0, trace=True)
        assert len(report.trace) == report.evaluations
        assert all(p.fx == eq5_poly(p.x) for p in report.trace)

    def test_budget_termination_keeps_partial_roots(self):
        report = find_roots(eq5_poly, 0.0, 10.0, SolverConfig(max_evaluations=40))
        assert report.terminated_by is Termination.BUDGET_EXCEEDED
        assert report.evaluations == 40

    def test_runaway_is_bounded(self, eq8):
        h, _ = eq8
        report = find_roots(h, 0.0, 1.5, SolverConfig(C=20, eps=1e-5, eps_m=1e-5, max_evaluations=1000))
        assert report.terminated_by is Termination.BUDGET_EXCEEDED

    def test_invalid_domain(self):
        with pytest.raises(ValueError):
            find_roots(lambda x: x, 1.0, 1.0)

    def test_roots_strictly_ascending_and_separated(self, eq10):
        p, _ = eq10
        report = find_roots(p, 0.0, 4.5, SolverConfig(C=0.01, max_evaluations=20000))
        for a, b in zip(report.roots, report.roots[1:]):
            assert a.location < b.location
            assert b.location - a.location >= a.error_bound + b.error_bound

    def test_endpoint_root_is_found(self):
        report = find_roots(lambda x: x * (x - 0.7), 0.0, 1.0)
        locs = [r.location for r in report.roots]
        assert any(abs(x) <= 1e-3 for x in locs)
        assert any(abs(x - 0.7) <= 1e-3 for x in locs)


roots_strategy = st.lists(st.floats(0.05, 0.95), min_size=1, max_size=4, unique=True).filter(
    lambda rs: len(rs) < 2 or min(np.diff(sorted(rs))) >= 0.02
)


@settings(max_examples=40, deadline=None)
@given(roots=roots_strategy, lead=st.sampled_from([-1.5, 1.0]))
def test_soundness_and_oracle_on_random_products(roots, lead):
    def f(x):
        v = lead
        for r in roots:
            v = v * (x - r)
        return v

    cfg = SolverConfig(C=0.001, eps=1e-2, eps_m=1e-4)
    report = find_roots(f, 0.0, 1.0, cfg)
    for root in report.roots:
        assert certified(root, f, cfg.eps_f)
    oracle = grid_sign_changes(f, 0.0, 1.0, points=10**5 + 1)
    locs = np.array([r.location for r in report.roots])
    assert len(locs) == len(oracle)
    assert np.all(np.abs(locs - oracle) <= 1e-4)
