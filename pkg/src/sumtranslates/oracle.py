"""Slow, transparent reference answers for cross-checking the fast paths.

Everything here is an exhaustive scan over an explicit grid, written
directly against the kernel and field evaluation functions.  Nothing is
shared with the interval search or the damped-Newton solver on purpose:
matching answers from two unrelated implementations is the point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import MaximaReport, Problem, as_nodes
from .kernels import NEG_INF


@dataclass(frozen=True)
class GridSpec:
    """Scan resolution: ``step`` between samples, window [-extent, extent]."""

    step: float
    extent: float

    def __post_init__(self):
        if not (math.isfinite(self.step) and self.step > 0):
            raise ValueError("step must be positive")
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise ValueError("extent must be positive")


def _sum_on(problem: Problem, nodes: np.ndarray, ts: np.ndarray) -> np.ndarray:
    # Deliberately re-derived from the definition instead of calling the
    # core evaluator.
    vals = problem.field.evaluate(ts).astype(float)
    for kernel, yj in zip(problem.kernels, nodes):
        with np.errstate(invalid="ignore"):
            vals = vals + np.asarray(kernel.evaluate(ts - yj), dtype=float)
    return vals


def _scan_points(problem: Problem, spec: GridSpec) -> np.ndarray:
    sp = problem.field.support_points
    if sp is not None:
        return np.array([x for x, _ in sp], dtype=float)
    count = int(math.floor(2.0 * spec.extent / spec.step)) + 1
    return -spec.extent + spec.step * np.arange(count)


def grid_local_maxima(problem: Problem, y, spec: GridSpec) -> MaximaReport:
    """Per-interval maxima by exhaustive scan, no refinement.

    Continuous fields are sampled every ``step`` on [-extent, extent] with
    the interval endpoints appended; finite-support fields are scanned
    exactly over their support points.  A window smaller than the step still
    yields a well-defined single-sample scan.
    """
    nodes = as_nodes(y)
    if nodes.shape != (problem.n,):
        raise ValueError(f"expected {problem.n} nodes, got {nodes.shape[0]}")
    ts = _scan_points(problem, spec)
    exact = problem.field.support_points is not None

    n = problem.n
    lower = np.concatenate(([-math.inf if exact else -spec.extent], nodes))
    upper = np.concatenate((nodes, [math.inf if exact else spec.extent]))

    values = np.full(n + 1, NEG_INF)
    locations = np.full(n + 1, math.nan)
    for j in range(n + 1):
        pts = ts[(ts >= lower[j]) & (ts <= upper[j])]
        if not exact:
            ends = [p for p in (lower[j], upper[j]) if math.isfinite(p)]
            pts = np.concatenate((pts, np.asarray(ends)))
        if pts.size == 0:
            continue
        vals = _sum_on(problem, nodes, pts)
        vals = np.where(np.isnan(vals), NEG_INF, vals)
        i = int(np.argmax(vals))
        if vals[i] > NEG_INF:
            values[j] = vals[i]
            locations[j] = pts[i]

    return MaximaReport(
        values=values,
        locations=locations,
        truncation_radius=math.inf if exact else spec.extent,
        in_regularity_set=bool(np.all(np.isfinite(values))),
    )


def _grid_differences(problem: Problem, nodes: np.ndarray, spec: GridSpec):
    report = grid_local_maxima(problem, nodes, spec)
    if not report.in_regularity_set:
        return None
    return np.diff(report.values)


def grid_invert(problem: Problem, d_target, spec: GridSpec, window: float | None = None):
    """Best node vector on a lattice: exhaustive minimization of the
    difference-map deviation in the max norm.

    Supports 1 or 2 nodes only.  Nodes range over [-window, window]
    (``window`` defaults to the scan extent).  The lattice is refined in
    stages: each stage scans exhaustively at its spacing, then the next
    stage re-scans a neighbourhood of the best point at one fifth of that
    spacing until the requested ``spec.step`` is reached, so the final
    answer is an exhaustive scan at ``spec.step`` around the minimizer.
    Returns (nodes, residual).
    """
    if problem.n > 2:
        raise ValueError("grid_invert supports at most 2 nodes")
    d_target = np.atleast_1d(np.asarray(d_target, dtype=float))
    if d_target.shape != (problem.n,):
        raise ValueError(f"target length {d_target.shape[0]} != {problem.n}")
    if window is None:
        window = spec.extent
    if not window > 0:
        raise ValueError("window must be positive")

    def residual(y: np.ndarray) -> float:
        d = _grid_differences(problem, y, spec)
        if d is None:
            return math.inf
        return float(np.max(np.abs(d - d_target)))

    # Stage 0: the full window at a coarse spacing; later stages shrink
    # around the incumbent at 5x resolution until spec.step is reached.
    coarse = max(spec.step, 2.0 * window / 120.0)
    centers = np.zeros(problem.n)
    half = window
    step = coarse
    best_y = None
    best_r = math.inf
    while True:
        axes = []
        for c in centers:
            lo = max(-window, c - half)
            hi = min(window, c + half)
            count = max(int(math.ceil((hi - lo) / step)) + 1, 2)
            axes.append(np.linspace(lo, hi, count))
        for combo in itertools.product(*axes):
            y = np.asarray(combo)
            if problem.n == 2 and not y[0] < y[1]:
                continue
            r = residual(y)
            better = (
                best_y is None
                or r < best_r - 1e-15
                or (abs(r - best_r) <= 1e-15 and tuple(y) < tuple(best_y))
            )
            if better:
                best_r = r
                best_y = y
        if best_y is None:
            raise ValueError("no admissible lattice point in the window")
        if step <= spec.step * (1.0 + 1e-9):
            return np.asarray(best_y), best_r
        centers = np.asarray(best_y)
        half = 4.0 * step
        step = max(spec.step, step / 5.0)
