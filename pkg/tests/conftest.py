"""Shared builders and small numeric oracles used across the test suite."""

import math

import numpy as np
import pytest

import sumtranslates as st


def bisect(f, lo: float, hi: float, tol: float = 1e-13, max_iter: int = 200) -> float:
    """Root of a scalar function by plain bisection; f(lo) and f(hi) must differ in sign."""
    flo, fhi = f(lo), f(hi)
    assert flo * fhi < 0, "bisection bracket does not straddle a root"
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def random_solver_problem(rng: np.random.Generator, n: int) -> st.Problem:
    """A random problem satisfying the solver hypotheses (singular kernels, admissible field)."""
    kernels = []
    for _ in range(n):
        if rng.random() < 0.5:
            kernels.append(st.log_kernel(weight=float(rng.uniform(0.5, 2.0))))
        else:
            kernels.append(
                st.log_linear_kernel(
                    weight=float(rng.uniform(0.5, 2.0)),
                    slope=float(rng.uniform(-0.3, 0.3)),
                )
            )
    if rng.random() < 0.5:
        field = st.neg_square_field(scale=float(rng.uniform(0.5, 2.0)))
    else:
        # Steep enough to dominate the total logarithmic weight plus linear tilts.
        field = st.neg_abs_field(scale=float(rng.uniform(1.5, 3.0)))
    return st.Problem(kernels=tuple(kernels), field=field)


def random_regular_nodes(rng: np.random.Generator, n: int, span: float = 2.0) -> np.ndarray:
    """Ascending nodes with all gaps bounded away from zero."""
    while True:
        y = np.sort(rng.uniform(-span, span, size=n))
        if n == 1 or float(np.min(np.diff(y))) > 1e-2:
            return y


@pytest.fixture
def unit_log_problem() -> st.Problem:
    """One unit-weight logarithmic kernel against the -|t| field."""
    return st.Problem(kernels=(st.log_kernel(),), field=st.neg_abs_field())


@pytest.fixture
def two_log_gaussian_problem() -> st.Problem:
    """Two unit-weight logarithmic kernels against the -t^2 field."""
    return st.Problem(
        kernels=(st.log_kernel(), st.log_kernel()), field=st.neg_square_field()
    )


def absolute_value_table_kernel() -> st.Kernel:
    """Piecewise-linear table matching -|t| on [-4, 4]: concave but not singular.

    Its slope limits are (1, -1), which is the wrong order, so it violates
    the slope-ordering hypothesis on purpose.
    """
    return st.table_kernel(
        neg_knots=[(-4.0, -4.0), (-2.0, -2.0), (-1.0, -1.0)],
        pos_knots=[(1.0, -1.0), (2.0, -2.0), (4.0, -4.0)],
    )


def log_like_table_kernel() -> st.Kernel:
    """Table sampled from log|t|: concave on each side, GM holds, but not singular.

    The end slopes are the secants of the outermost segments,
    (-log2/8, +log2/8), which are correctly ordered; the only solver
    hypothesis this kernel violates is the singularity at 0.
    """
    ts = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0]
    pos = [(t, math.log(t)) for t in ts]
    neg = [(-t, math.log(t)) for t in reversed(ts)]
    return st.table_kernel(neg_knots=neg, pos_knots=pos)
