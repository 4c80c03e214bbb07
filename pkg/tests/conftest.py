import math

import numpy as np
import pytest

from grbm.core import RootKind
from grbm.expr import compile_expr, differentiate, parse
from grbm.presets import PRESETS


def certified(root, f, eps_f):
    """Post-hoc certificate: a sign change across a bracketed enclosure, or |f| <= eps_f."""
    if root.kind is RootKind.BRACKETED:
        if root.error_bound == 0.0:
            return f(root.location) == 0.0
        lo, hi = root.location - root.error_bound, root.location + root.error_bound
        return f(lo) * f(hi) < 0 or f(root.location) == 0.0
    return abs(f(root.location)) <= eps_f


def grid_sign_changes(f_vec, a, b, points=10**6 + 1):
    """Dense-grid oracle: nodes where f is exactly 0 plus midpoints of sign-change cells."""
    xs = np.linspace(a, b, points)
    fs = f_vec(xs)
    idx = np.nonzero(fs[:-1] * fs[1:] < 0)[0]
    return np.sort(np.concatenate([(xs[idx] + xs[idx + 1]) / 2, xs[fs == 0.0]]))


def preset_functions(name):
    tree = parse(PRESETS[name].text)
    return compile_expr(tree), compile_expr(differentiate(tree))


@pytest.fixture
def eq5():
    return preset_functions("eq5")


@pytest.fixture
def eq7():
    return preset_functions("eq7")


@pytest.fixture
def eq8():
    return preset_functions("eq8")


@pytest.fixture
def eq10():
    return preset_functions("eq10")


def eq5_poly(x):
    return (x - 0.5) * (x - 0.50001) * (x - 4) * (x - 4.05) * (x - 9.3)


def is_close(a, b, tol):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


def random_smooth_expr(rng, depth=3):
    """Random expression text in x that is smooth and finite on [-2, 2].

    Leaves are x or small constants; ln, sqrt and division only ever see
    arguments bounded away from zero, so every sample is differentiable.
    """
    if depth == 0 or rng.random() < 0.2:
        return "x" if rng.random() < 0.6 else repr(round(rng.uniform(-3, 3), 3))
    sub = random_smooth_expr(rng, depth - 1)
    pick = rng.randrange(11)
    if pick < 3:
        op = "+-*"[pick]
        return f"({sub} {op} {random_smooth_expr(rng, depth - 1)})"
    if pick == 3:
        return f"({sub}) / (1 + ({random_smooth_expr(rng, depth - 1)})^2)"
    if pick == 4:
        return f"({sub})^{rng.randint(2, 3)}"
    if pick == 5:
        return f"sin({sub})"
    if pick == 6:
        return f"cos({sub})"
    if pick == 7:
        return f"exp(sin({sub}))"
    if pick == 8:
        return f"ln(2 + cos({sub}))"
    if pick == 9:
        return f"sqrt(1 + ({sub})^2)"
    return f"-({sub})"


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
