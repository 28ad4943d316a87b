"""Inversion of the difference map: find nodes whose consecutive interval
maxima differ by a prescribed vector.

The difference map is a locally bi-Lipschitz homeomorphism from the regular
configurations onto all of R^n, so every target has exactly one solution;
the solver looks for it with a damped quasi-Newton iteration (forward
difference Jacobian, backtracking line search, ordering-preserving
projection), multi-start seeding, and a homotopy fallback.  Failure raises;
it never returns a silent non-answer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MaximaReport, Problem, as_nodes, local_maxima, tail_bound
from .exceptions import HypothesesError, NotInRegularitySetError, SolverFailedError
from .fields import is_admissible
from .kernels import slope_limits

_GAP = 1e-10
_FD_SCALE = 1e-6
_MIN_LAMBDA = 1e-12
_HOMOTOPY_STEPS = 10


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Outcome of a difference-map inversion."""

    nodes: np.ndarray
    achieved: np.ndarray
    residual: float
    iterations: int
    starts_used: int
    converged: bool
    report: MaximaReport


@dataclass(frozen=True, eq=False)
class EquioscillationResult(SolveResult):
    """Inversion at target 0; ``level`` is the common interval maximum."""

    level: float = math.nan


@dataclass(frozen=True)
class LipschitzProbe:
    """Sampled two-sided Lipschitz ratios of the difference map on a ball."""

    lower: float
    upper: float
    pairs_used: int
    pairs_skipped: int


def require_solver_hypotheses(problem: Problem, *, admissible_override: bool = False) -> None:
    """Raise ``HypothesesError`` unless the uniqueness hypotheses hold.

    Every kernel must be singular, declared strictly concave, and have its
    slope limit at -inf no larger than the one at +inf; the field must pass
    the admissibility probe (skippable via ``admissible_override``).
    """
    for j, k in enumerate(problem.kernels):
        if not k.singular:
            raise HypothesesError(f"hypotheses of main theorem unmet: kernel {j} is not singular")
        if not k.strictly_concave_claimed:
            raise HypothesesError(
                f"hypotheses of main theorem unmet: kernel {j} is not declared strictly concave"
            )
        if not slope_limits(k).gm_holds:
            raise HypothesesError(
                f"hypotheses of main theorem unmet: kernel {j} has slope limits out of order"
            )
    if not admissible_override:
        verdict = is_admissible(problem.field, problem.kernels)
        if not verdict:
            raise HypothesesError(
                f"hypotheses of main theorem unmet: field failed the admissibility probe "
                f"({verdict.reason})"
            )


class _DifferenceEvaluator:
    """Evaluates the difference map, reusing the truncation radius while the
    node envelope stays put."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self.continuous = problem.field.support_points is None
        self.tau = None
        self.tau_base = None
        self.calls = 0

    def __call__(self, y: np.ndarray):
        self.calls += 1
        tau = None
        if self.continuous:
            base = max(abs(y[0]), abs(y[-1])) + 1.0
            if self.tau is None or base > self.tau_base + 0.25 or 2.0 * base > self.tau:
                self.tau = tail_bound(self.problem, y, margin=2.0)
                self.tau_base = base
            tau = self.tau
        report = local_maxima(self.problem, y, tau=tau)
        if not report.in_regularity_set:
            return None, report
        return np.diff(report.values), report


def _project(y: np.ndarray) -> np.ndarray:
    out = y.copy()
    for j in range(1, len(out)):
        if out[j] < out[j - 1] + _GAP:
            out[j] = out[j - 1] + _GAP
    return out


def _jacobian(D, y: np.ndarray, d0: np.ndarray):
    n = len(y)
    h = _FD_SCALE * max(1.0, float(np.max(np.abs(y))))
    J = np.empty((n, n))
    for j in range(n):
        up_room = (y[j + 1] - y[j]) if j + 1 < n else math.inf
        dn_room = (y[j] - y[j - 1]) if j > 0 else math.inf
        hj = h
        if up_room < 4.0 * h <= dn_room:
            hj = -h
        elif up_room < 4.0 * h and dn_room < 4.0 * h:
            hj = max(min(up_room, dn_room) / 4.0, 4.0 * _GAP)
        yj = y.copy()
        yj[j] += hj
        dj, _ = D(yj)
        if dj is None:
            yj = y.copy()
            yj[j] -= hj
            dj, _ = D(yj)
            hj = -hj
            if dj is None:
                return None
        J[:, j] = (dj - d0) / hj
    return J


def _newton(D, d_target: np.ndarray, y0: np.ndarray, tol: float, max_iter: int):
    """One damped Newton run.  Returns (y, d, report, residual, iters, ok)."""
    y = _project(np.asarray(y0, dtype=float))
    d, report = D(y)
    if d is None:
        return y, None, report, math.inf, 0, False
    g = d - d_target
    res = float(np.max(np.abs(g)))
    iters = 0
    while res > tol and iters < max_iter:
        J = _jacobian(D, y, d)
        if J is None:
            return y, d, report, res, iters, False
        try:
            step = np.linalg.solve(J, -g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -g, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            return y, d, report, res, iters, False

        lam = 1.0
        accepted = False
        while lam >= _MIN_LAMBDA:
            y_new = _project(y + lam * step)
            d_new, rep_new = D(y_new)
            if d_new is not None:
                res_new = float(np.max(np.abs(d_new - d_target)))
                if res_new < res:
                    y, d, report, res = y_new, d_new, rep_new, res_new
                    g = d - d_target
                    accepted = True
                    break
            lam *= 0.5
        iters += 1
        if not accepted:
            return y, d, report, res, iters, False
    return y, d, report, res, iters, res <= tol


def _quantile_cuts(count: int, n: int) -> list[int]:
    cuts: list[int] = []
    for i in range(n):
        c = int(round((i + 1) * count / (n + 1)))
        c = max(c, cuts[-1] + 1 if cuts else 1)
        c = min(c, count - 1 - (n - 1 - i))
        cuts.append(c)
    return cuts


def _start_points(problem: Problem, starts: int, rng) -> list[np.ndarray]:
    n = problem.n
    sp = problem.field.support_points
    if sp is not None:
        xs = np.array(sorted(x for x, _ in sp))
        cuts = _quantile_cuts(len(xs), n)
        base = np.array([(xs[c - 1] + xs[c]) / 2.0 for c in cuts])
        widths = np.array([xs[c] - xs[c - 1] for c in cuts])
        out = [base]
        for _ in range(max(starts - 1, 0)):
            jitter = rng.uniform(-0.4, 0.4, size=n) * widths
            out.append(_project(base + jitter))
        return out

    tau0 = tail_bound(problem, np.zeros(n), margin=1.0)
    ts = np.linspace(-tau0, tau0, 1025)
    logw = problem.field.evaluate(ts)
    finite = np.isfinite(logw)
    w = np.zeros_like(ts)
    if finite.any():
        w[finite] = np.exp(logw[finite] - logw[finite].max())
    cdf = np.cumsum(w)
    if cdf[-1] <= 0:
        base = np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)
        spread = 1.0
    else:
        cdf = cdf / cdf[-1]
        qs = (np.arange(1, n + 1)) / (n + 1.0)
        base = np.interp(qs, cdf, ts)
        lo, hi = np.interp([0.1, 0.9], cdf, ts)
        spread = max(float(hi - lo), 0.2)
    base = _project(base)
    out = [base]
    for k in range(max(starts - 1, 0)):
        sigma = (0.1 + 0.4 * (k + 1) / max(starts - 1, 1)) * spread / max(n, 1)
        out.append(_project(base + rng.uniform(-1.0, 1.0, size=n) * sigma))
    return out


def invert_difference(
    problem: Problem,
    d_target,
    *,
    tol: float = 1e-8,
    max_iter: int = 200,
    starts: int = 10,
    seed: int = 0,
    admissible_override: bool = False,
    hypotheses_override: bool = False,
    start_override=None,
) -> SolveResult:
    """Find the node vector whose difference vector equals ``d_target``.

    Runs the damped Newton iteration from up to ``starts`` seeded initial
    configurations, then from a homotopy continuation path if every start
    stagnates.  Raises ``SolverFailedError`` (carrying the best attempt)
    when nothing converges, and ``HypothesesError`` when the problem does
    not satisfy the uniqueness hypotheses (``hypotheses_override`` skips
    that gate for callers that have run their own checks).
    """
    d_target = np.atleast_1d(np.asarray(d_target, dtype=float))
    if d_target.shape != (problem.n,):
        raise ValueError(f"target length {d_target.shape[0]} != {problem.n}")
    if not np.all(np.isfinite(d_target)):
        raise ValueError("target must be finite")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not hypotheses_override:
        require_solver_hypotheses(problem, admissible_override=admissible_override)

    rng = np.random.default_rng(seed)
    D = _DifferenceEvaluator(problem)
    if start_override is not None:
        seeds = [as_nodes(start_override)]
    else:
        seeds = _start_points(problem, starts, rng)

    total_iters = 0
    best = None  # (res, y, d, report)
    for used, y0 in enumerate(seeds, start=1):
        y, d, report, res, iters, ok = _newton(D, d_target, y0, tol, max_iter)
        total_iters += iters
        if d is not None and (best is None or res < best[0]):
            best = (res, y, d, report)
        if ok:
            return SolveResult(
                nodes=y,
                achieved=d,
                residual=res,
                iterations=total_iters,
                starts_used=used,
                converged=True,
                report=report,
            )

    # Homotopy fallback: walk the target from a reachable difference vector
    # to the requested one in fixed fractions, warm-starting each leg.
    if best is not None:
        y = best[1]
        d_anchor = best[2]
        ok_path = True
        for step_i in range(1, _HOMOTOPY_STEPS + 1):
            s = step_i / _HOMOTOPY_STEPS
            target_s = (1.0 - s) * d_anchor + s * d_target
            leg_tol = tol if step_i == _HOMOTOPY_STEPS else max(tol, 1e-6)
            y, d, report, res, iters, ok = _newton(D, target_s, y, leg_tol, max_iter)
            total_iters += iters
            if not ok:
                ok_path = False
                break
        if ok_path:
            res = float(np.max(np.abs(d - d_target)))
            if res <= tol:
                return SolveResult(
                    nodes=y,
                    achieved=d,
                    residual=res,
                    iterations=total_iters,
                    starts_used=len(seeds),
                    converged=True,
                    report=report,
                )
        if d is not None and res < best[0]:
            best = (res, y, d, report)

    result = None
    if best is not None:
        result = SolveResult(
            nodes=best[1],
            achieved=best[2],
            residual=best[0],
            iterations=total_iters,
            starts_used=len(seeds),
            converged=False,
            report=best[3],
        )
    raise SolverFailedError(
        "solver failed: no start converged"
        + (f" (best residual {best[0]:.3g})" if best is not None else ""),
        result=result,
    )


def equioscillate(
    problem: Problem,
    *,
    tol: float = 1e-8,
    max_iter: int = 200,
    starts: int = 10,
    seed: int = 0,
    admissible_override: bool = False,
) -> EquioscillationResult:
    """Nodes at which all n+1 interval maxima coincide (difference target 0).

    The common level is reported; its spread across intervals is at most
    2*tol, which for more than two intervals means solving to a slightly
    tighter internal tolerance.
    """
    inner_tol = tol if problem.n <= 2 else 2.0 * tol / problem.n
    res = invert_difference(
        problem,
        np.zeros(problem.n),
        tol=inner_tol,
        max_iter=max_iter,
        starts=starts,
        seed=seed,
        admissible_override=admissible_override,
    )
    values = res.report.values
    spread = float(values.max() - values.min())
    if spread > 2.0 * tol:
        raise SolverFailedError(
            f"solver failed: equioscillation spread {spread:.3g} exceeds {2.0 * tol:.3g}",
            result=res,
        )
    return EquioscillationResult(
        nodes=res.nodes,
        achieved=res.achieved,
        residual=res.residual,
        iterations=res.iterations,
        starts_used=res.starts_used,
        converged=res.converged,
        report=res.report,
        level=float(values.mean()),
    )


def local_lipschitz_probe(
    problem: Problem,
    y,
    radius: float,
    samples: int = 200,
    seed: int = 0,
) -> LipschitzProbe:
    """Empirical bi-Lipschitz ratio bounds of the difference map near y.

    Samples pairs in the max-norm ball of the given radius and returns the
    smallest and largest observed ratio |D(a) - D(b)| / |a - b| (max norms).
    Pairs leaving the regularity set (or collapsing the node ordering) are
    skipped; if every pair is skipped, or the center itself is irregular,
    the ball is declared to leave the regularity set.
    """
    nodes = as_nodes(y)
    if not (math.isfinite(radius) and radius > 0):
        raise ValueError("degenerate ball: radius must be positive")
    if samples < 1:
        raise ValueError("samples must be at least 1")

    D = _DifferenceEvaluator(problem)
    d_center, report = D(nodes)
    if d_center is None:
        bad = int(np.flatnonzero(~np.isfinite(report.values))[0])
        raise NotInRegularitySetError(
            "ball leaves regularity set: center configuration is irregular", index=bad
        )

    rng = np.random.default_rng(seed)
    lower = math.inf
    upper = 0.0
    used = 0
    skipped = 0
    for _ in range(samples):
        a = nodes + rng.uniform(-radius, radius, size=nodes.size)
        b = nodes + rng.uniform(-radius, radius, size=nodes.size)
        if np.any(np.diff(a) <= 0) or np.any(np.diff(b) <= 0):
            skipped += 1
            continue
        gap = float(np.max(np.abs(a - b)))
        if gap < 1e-14:
            skipped += 1
            continue
        da, _ = D(a)
        db, _ = D(b)
        if da is None or db is None:
            skipped += 1
            continue
        ratio = float(np.max(np.abs(da - db))) / gap
        lower = min(lower, ratio)
        upper = max(upper, ratio)
        used += 1
    if used == 0:
        raise NotInRegularitySetError(
            "ball leaves regularity set: no sampled pair stayed regular", index=0
        )
    return LipschitzProbe(lower=lower, upper=upper, pairs_used=used, pairs_skipped=skipped)
