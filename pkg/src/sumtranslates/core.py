"""Sums of translated kernels plus a field: evaluation, interval maxima,
truncation radii and the difference map between consecutive maxima.

For kernels K_1..K_n, field J and ascending nodes y_1 <= ... <= y_n, the
object of study is

    S(y, t) = J(t) + sum_j K_j(t - y_j).

The nodes cut the axis into n+1 intervals; the per-interval suprema
m_0..m_n (extended reals) drive everything downstream.  A configuration is
regular when all of them are finite, and the difference map sends y to
(m_1 - m_0, ..., m_n - m_{n-1}).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import sumscan
from .exceptions import AdmissibilityError, FieldError, NotInRegularitySetError
from .fields import Field
from .kernels import NEG_INF, Kernel

# Node endpoints of search intervals are avoided by this margin so singular
# kernels never poison the grid scan with exact -inf hits at interval ends.
_NODE_GUARD = 1e-12

# Beyond this truncation radius the doubling scan gives up and declares the
# configuration numerically inadmissible.
_MAX_TAU = 2.0**40

_INTERIOR_SAMPLES = 513
_TAIL_PROBES = 65


@dataclass(frozen=True)
class NodeConfig:
    """A validated ascending node vector (coincidences allowed)."""

    nodes: tuple[float, ...]

    def __post_init__(self):
        if len(self.nodes) == 0:
            raise ValueError("need at least one node")
        last = None
        for v in self.nodes:
            if not math.isfinite(v):
                raise ValueError("nodes must be finite")
            if last is not None and v < last:
                raise ValueError("nodes must be ascending")
            last = v

    @property
    def n(self) -> int:
        return len(self.nodes)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.nodes, dtype=float)


def as_nodes(y) -> np.ndarray:
    """Coerce a NodeConfig or sequence into a validated float array."""
    if isinstance(y, NodeConfig):
        return y.as_array()
    return NodeConfig(tuple(float(v) for v in np.atleast_1d(np.asarray(y)))).as_array()


@dataclass(frozen=True)
class Problem:
    """A translates configuration: n kernels and one field.

    ``grid_density`` (points per search interval) and ``refine_tol`` (the
    golden-section location tolerance) may be overridden per problem.
    """

    kernels: tuple[Kernel, ...]
    field: Field
    grid_density: int = 2048
    refine_tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "kernels", tuple(self.kernels))
        if len(self.kernels) == 0:
            raise ValueError("need at least one kernel")
        if not (self.field.finite_support_count > len(self.kernels)):
            raise FieldError(
                "field must be finite at more than "
                f"{len(self.kernels)} points to pair with {len(self.kernels)} kernels"
            )
        if self.grid_density < 8:
            raise ValueError("grid_density must be at least 8")
        if not (0 < self.refine_tol <= 1e-2):
            raise ValueError("refine_tol must be in (0, 1e-2]")

    @property
    def n(self) -> int:
        return len(self.kernels)


@dataclass(frozen=True, eq=False)
class MaximaReport:
    """Per-interval suprema of the sum for one node configuration.

    ``values[j]`` is the supremum over the j-th node-cut interval (extended
    real), ``locations[j]`` a maximizer (nan when the supremum is -inf),
    ``truncation_radius`` the finite window actually searched (inf when the
    scan was exact, as for discrete fields).
    """

    values: np.ndarray
    locations: np.ndarray
    truncation_radius: float
    in_regularity_set: bool


@functools.lru_cache(maxsize=512)
def _encoded_handle(problem: Problem):
    enc = sumscan.encode(problem.kernels, problem.field)
    if enc is None:
        raise FieldError(f"field kind {problem.field.kind!r} has no continuous scan encoding")
    return sumscan.make_handle(enc)


def evaluate_sum(problem: Problem, y, t):
    """S(y, t) = field(t) + sum of kernels at t - y_j; float or ndarray t."""
    nodes = as_nodes(y)
    _check_arity(problem, nodes)
    scalar = np.isscalar(t) or getattr(t, "ndim", 0) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = problem.field.evaluate(ts).astype(float)
    for kernel, yj in zip(problem.kernels, nodes):
        with np.errstate(invalid="ignore"):
            out = out + np.asarray(kernel.evaluate(ts - yj), dtype=float)
    return float(out[0]) if scalar else out


def _check_arity(problem: Problem, nodes: np.ndarray) -> None:
    if nodes.shape != (problem.n,):
        raise ValueError(f"expected {problem.n} nodes, got {nodes.shape[0]}")


def tail_bound(problem: Problem, y, margin: float = 2.0) -> float:
    """A radius tau beyond which the sum sits ``margin`` below its interior level.

    Doubling scan: starting from twice max(|y_1|, |y_n|) + 1, the radius is
    doubled until every probe in [tau, 4*tau] (both signs) is at least
    ``margin`` below an interior estimate of the supremum.  Margins below 1
    are rejected; if no radius up to 2^40 works the configuration is declared
    numerically inadmissible.
    """
    nodes = as_nodes(y)
    _check_arity(problem, nodes)
    if not margin >= 1.0:
        raise ValueError("margin must be at least 1")

    base = max(abs(nodes[0]), abs(nodes[-1])) + 1.0
    interior = _interior_level(problem, nodes, base)

    tau = 2.0 * base
    while tau <= _MAX_TAU:
        if _tail_clears(problem, nodes, tau, interior - margin):
            return tau
        tau *= 2.0
    raise AdmissibilityError(
        f"admissibility violated numerically: no truncation radius up to {_MAX_TAU:g} works"
    )


def _interior_level(problem: Problem, nodes: np.ndarray, base: float) -> float:
    sp = problem.field.support_points
    if sp is not None:
        ts = np.array([x for x, _ in sp], dtype=float)
    else:
        ts = np.linspace(-base, base, _INTERIOR_SAMPLES)
    vals = evaluate_sum(problem, nodes, ts)
    finite = vals[np.isfinite(vals)]
    if finite.size == 0:
        raise AdmissibilityError(
            "admissibility violated numerically: no finite interior sample"
        )
    return float(finite.max())


def _tail_clears(problem: Problem, nodes: np.ndarray, tau: float, level: float) -> bool:
    radii = np.geomspace(tau, 4.0 * tau, _TAIL_PROBES)
    for sign in (1.0, -1.0):
        vals = evaluate_sum(problem, nodes, sign * radii)
        if not np.all(vals <= level):
            return False
    return True


def local_maxima(problem: Problem, y, *, tau: float | None = None) -> MaximaReport:
    """Suprema of the sum over the n+1 node-cut intervals.

    Continuous fields are truncated to [-tau, tau] (margin-2 tail bound when
    ``tau`` is not given) and searched per interval with a uniform grid plus
    golden-section refinement.  Fields with finite support are scanned
    exactly over their support points.  A degenerate interval between
    coincident nodes contributes the sum value at the node itself.
    """
    nodes = as_nodes(y)
    _check_arity(problem, nodes)

    if problem.field.support_points is not None:
        return _local_maxima_discrete(problem, nodes)

    if tau is None:
        tau = tail_bound(problem, nodes, margin=2.0)
    else:
        tau = float(tau)
        if not tau > max(abs(nodes[0]), abs(nodes[-1])):
            raise ValueError("tau must exceed the outermost node magnitude")

    # An end-interval maximizer sitting in the outermost grid cell means the
    # window clipped the supremum; double and rescan.
    values, locations = _scan_continuous(problem, nodes, tau)
    for _ in range(6):
        if not _edge_pinned(problem, nodes, tau, values, locations):
            break
        if 2.0 * tau > _MAX_TAU:
            raise AdmissibilityError(
                "admissibility violated numerically: supremum keeps escaping the window"
            )
        tau *= 2.0
        values, locations = _scan_continuous(problem, nodes, tau)

    return MaximaReport(
        values=values,
        locations=locations,
        truncation_radius=float(tau),
        in_regularity_set=bool(np.all(np.isfinite(values))),
    )


def _scan_continuous(problem: Problem, nodes: np.ndarray, tau: float):
    n = problem.n
    handle = _encoded_handle(problem)
    values = np.empty(n + 1)
    locations = np.empty(n + 1)
    bounds = [(-tau, *nodes), (*nodes, tau)]
    for j in range(n + 1):
        a, b = bounds[0][j], bounds[1][j]
        a_eff = a + _NODE_GUARD if j > 0 else a
        b_eff = b - _NODE_GUARD if j < n else b
        if a_eff >= b_eff:
            values[j] = evaluate_sum(problem, nodes, 0.5 * (a + b))
            locations[j] = 0.5 * (a + b)
            if values[j] == NEG_INF:
                locations[j] = math.nan
            continue
        m, z = sumscan.interval_peak(
            handle, nodes, a_eff, b_eff, problem.grid_density, problem.refine_tol
        )
        values[j] = m
        locations[j] = z
    return values, locations


def _edge_pinned(problem, nodes, tau, values, locations) -> bool:
    n = problem.n
    left_cell = (nodes[0] + tau) / max(problem.grid_density - 1, 1)
    right_cell = (tau - nodes[-1]) / max(problem.grid_density - 1, 1)
    if math.isfinite(values[0]) and locations[0] <= -tau + 2.0 * left_cell:
        return True
    if math.isfinite(values[n]) and locations[n] >= tau - 2.0 * right_cell:
        return True
    return False


def _local_maxima_discrete(problem: Problem, nodes: np.ndarray) -> MaximaReport:
    n = problem.n
    sp = problem.field.support_points
    xs = np.array([x for x, _ in sp], dtype=float)
    all_vals = evaluate_sum(problem, nodes, xs)

    values = np.full(n + 1, NEG_INF)
    locations = np.full(n + 1, math.nan)
    lower = np.concatenate(([-math.inf], nodes))
    upper = np.concatenate((nodes, [math.inf]))
    for j in range(n + 1):
        mask = (xs >= lower[j]) & (xs <= upper[j])
        if not mask.any():
            continue
        vals = all_vals[mask]
        i = int(np.argmax(vals))
        if vals[i] > NEG_INF:
            values[j] = vals[i]
            locations[j] = xs[mask][i]

    return MaximaReport(
        values=values,
        locations=locations,
        truncation_radius=math.inf,
        in_regularity_set=bool(np.all(np.isfinite(values))),
    )


def in_regularity_set(problem: Problem, y) -> bool:
    """True when every interval supremum is finite."""
    return local_maxima(problem, y).in_regularity_set


def difference_map(problem: Problem, y) -> np.ndarray:
    """Consecutive differences (m_1 - m_0, ..., m_n - m_{n-1}).

    Raises ``NotInRegularitySetError`` (carrying the first offending interval
    index) when some supremum is infinite.
    """
    report = local_maxima(problem, y)
    return differences_from_report(report)


def differences_from_report(report: MaximaReport) -> np.ndarray:
    """The difference vector of an existing maxima report."""
    if not report.in_regularity_set:
        bad = int(np.flatnonzero(~np.isfinite(report.values))[0])
        raise NotInRegularitySetError(
            f"not in regularity set: interval {bad} has supremum -inf", index=bad
        )
    return np.diff(report.values)


def write_profile(problem: Problem, y, t_min: float, t_max: float, count: int, dest) -> None:
    """Write ``count`` uniform samples of the sum as CSV rows "t,value".

    ``dest`` is a path or a text file object.  -inf is written literally as
    ``-inf``; other numbers carry 9 significant digits.
    """
    if count < 2:
        raise ValueError("count must be at least 2")
    if not t_max > t_min:
        raise ValueError("t_max must exceed t_min")
    nodes = as_nodes(y)
    ts = np.linspace(t_min, t_max, count)
    vals = evaluate_sum(problem, nodes, ts)
    close = False
    if isinstance(dest, (str, bytes)) or hasattr(dest, "__fspath__"):
        fh = open(dest, "w", encoding="utf-8")
        close = True
    else:
        fh = dest
    try:
        fh.write("t,F\n")
        for t, v in zip(ts, vals):
            fh.write(f"{t:.9g},{_format_value(v)}\n")
    finally:
        if close:
            fh.close()


def _format_value(v: float) -> str:
    if v == NEG_INF:
        return "-inf"
    return f"{v:.9g}"
