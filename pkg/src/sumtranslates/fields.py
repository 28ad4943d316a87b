"""External fields: the non-translated summand of a translates configuration.

A field is an extended-real function bounded above and finite at more than n
points (n = number of kernels it will be paired with).  Supported kinds:
two concave prototypes ``-scale*|t|`` and ``-scale*t^2``, a piecewise-linear
log-weight table, a discrete field (finite at finitely many points, -inf
elsewhere), and a semi-axis restriction that forces -inf on t < 0.  Every
kind carries an optional horizontal ``offset``: the field is evaluated at
t - offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import FieldError
from .kernels import NEG_INF, Kernel

_FIELD_KINDS = ("neg_abs", "neg_square", "log_weight_table", "discrete", "restrict_semiaxis")


@dataclass(frozen=True)
class Field:
    """An external field; build instances via the ``*_field`` constructors."""

    kind: str
    scale: float = 1.0
    knots: tuple[tuple[float, float], ...] | None = None
    points: tuple[tuple[float, float], ...] | None = None
    inner: "Field | None" = None
    offset: float = 0.0
    upper_bound: float = 0.0
    finite_support_count: float = math.inf

    def evaluate(self, t):
        """Evaluate at a float or ndarray, -inf where the field is infinite."""
        scalar = np.isscalar(t) or getattr(t, "ndim", 0) == 0
        u = np.atleast_1d(np.asarray(t, dtype=float)) - self.offset
        out = self._evaluate_shifted(u)
        return float(out[0]) if scalar else out

    def _evaluate_shifted(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "neg_abs":
            return -self.scale * np.abs(u)
        if self.kind == "neg_square":
            return -self.scale * u * u
        if self.kind == "log_weight_table":
            xs = np.array([k[0] for k in self.knots], dtype=float)
            vs = np.array([k[1] for k in self.knots], dtype=float)
            out = np.interp(u, xs, vs)
            sl, sr = self._table_end_slopes()
            out = np.where(u < xs[0], vs[0] + sl * (u - xs[0]), out)
            out = np.where(u > xs[-1], vs[-1] + sr * (u - xs[-1]), out)
            return out
        if self.kind == "discrete":
            out = np.full(u.shape, NEG_INF)
            for x, v in self.points:
                out[u == x] = v
            return out
        # restrict_semiaxis
        out = self.inner._evaluate_shifted(
            (u - self.inner.offset).astype(float)
        )
        return np.where(u < 0.0, NEG_INF, out)

    def _table_end_slopes(self) -> tuple[float, float]:
        (t0, v0), (t1, v1) = self.knots[0], self.knots[1]
        (ta, va), (tb, vb) = self.knots[-2], self.knots[-1]
        return (v1 - v0) / (t1 - t0), (vb - va) / (tb - ta)

    @property
    def support_points(self) -> tuple[tuple[float, float], ...] | None:
        """Finite-support (position, value) pairs, or None for continuous kinds.

        Positions are in the evaluation frame, offsets already applied.
        """
        if self.kind == "discrete":
            return tuple((x + self.offset, v) for x, v in self.points)
        if self.kind == "restrict_semiaxis":
            sp = self.inner.support_points
            if sp is None:
                return None
            return tuple((x + self.offset, v) for x, v in sp if x >= 0.0)
        return None

    def shifted(self, c: float) -> "Field":
        """The same field translated by c: shifted(c).evaluate(t + c) == evaluate(t)."""
        if not math.isfinite(c):
            raise FieldError("shift must be finite")
        return Field(
            kind=self.kind,
            scale=self.scale,
            knots=self.knots,
            points=self.points,
            inner=self.inner,
            offset=self.offset + c,
            upper_bound=self.upper_bound,
            finite_support_count=self.finite_support_count,
        )


def neg_abs_field(scale: float = 1.0) -> Field:
    """J(t) = -scale * |t|."""
    _require_positive_scale(scale)
    return Field(kind="neg_abs", scale=float(scale), upper_bound=0.0)


def neg_square_field(scale: float = 1.0) -> Field:
    """J(t) = -scale * t^2."""
    _require_positive_scale(scale)
    return Field(kind="neg_square", scale=float(scale), upper_bound=0.0)


def _require_positive_scale(scale: float) -> None:
    if not (math.isfinite(scale) and scale > 0):
        raise FieldError("scale must be a positive finite number")


def table_field(knots) -> Field:
    """Piecewise-linear field through (t, value) knots, linear beyond the ends.

    Needs at least 2 knots with strictly increasing positions.  The left
    extrapolation slope must be >= 0 and the right one <= 0, otherwise the
    field is unbounded above.
    """
    knots = tuple((float(t), float(v)) for t, v in knots)
    if len(knots) < 2:
        raise FieldError("table field needs at least 2 knots")
    last = None
    for t, v in knots:
        if not (math.isfinite(t) and math.isfinite(v)):
            raise FieldError("table field knots must be finite")
        if last is not None and t <= last:
            raise FieldError("table field knots must be strictly increasing")
        last = t
    sl = (knots[1][1] - knots[0][1]) / (knots[1][0] - knots[0][0])
    sr = (knots[-1][1] - knots[-2][1]) / (knots[-1][0] - knots[-2][0])
    if sl < 0.0 or sr > 0.0:
        raise FieldError("field unbounded above: end slopes must point downward")
    return Field(
        kind="log_weight_table",
        knots=knots,
        upper_bound=max(v for _, v in knots),
    )


def discrete_field(points) -> Field:
    """Field finite exactly at the given (position, value) points.

    Positions must be strictly increasing and values finite.
    """
    points = tuple((float(x), float(v)) for x, v in points)
    if not points:
        raise FieldError("discrete field needs at least 1 point")
    last = None
    for x, v in points:
        if not (math.isfinite(x) and math.isfinite(v)):
            raise FieldError("discrete field points must be finite")
        if last is not None and x <= last:
            raise FieldError("discrete field positions must be strictly increasing")
        last = x
    return Field(
        kind="discrete",
        points=points,
        upper_bound=max(v for _, v in points),
        finite_support_count=len(points),
    )


def semiaxis_field(inner: Field) -> Field:
    """Restrict a field to [0, inf): -inf below 0, the inner field above."""
    if inner.kind == "restrict_semiaxis":
        raise FieldError("cannot nest semi-axis restrictions")
    if inner.kind == "discrete":
        count = sum(1 for x, _ in inner.support_points if x >= 0.0)
        if count == 0:
            raise FieldError("inner discrete field has no points on [0, inf)")
    else:
        count = math.inf
    return Field(
        kind="restrict_semiaxis",
        inner=inner,
        upper_bound=inner.upper_bound,
        finite_support_count=count,
    )


@dataclass(frozen=True)
class AdmissibilityReport:
    """Probe-based divergence verdict with its diagnostic trail.

    ``trail`` holds (t, sum value) pairs for probes at t = ±2^k; the verdict
    is true when, in both directions, the last five probes sit at least 10
    below the interior estimate and do not increase.
    """

    admissible: bool
    trail: tuple[tuple[float, float], ...]
    interior_estimate: float
    reason: str

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible(field: Field, kernels, probe_levels: int = 24) -> AdmissibilityReport:
    """Heuristic check that field + sum of kernels diverges to -inf at ±inf."""
    return probe_divergence(field, kernels, None, probe_levels)


def probe_divergence(
    field: Field, kernels, translations=None, probe_levels: int = 24
) -> AdmissibilityReport:
    """Like :func:`is_admissible`, with kernels translated by the given offsets."""
    kernels = tuple(kernels)
    if not kernels:
        raise FieldError("need at least one kernel")
    if probe_levels < 5:
        raise FieldError("probe_levels must be at least 5")
    if translations is None:
        y = np.zeros(len(kernels))
    else:
        y = np.asarray(translations, dtype=float)
        if y.shape != (len(kernels),):
            raise FieldError("translations must have one entry per kernel")

    def total(ts: np.ndarray) -> np.ndarray:
        s = field.evaluate(ts).astype(float)
        for kernel, yj in zip(kernels, y):
            s = s + np.asarray(kernel.evaluate(ts - yj), dtype=float)
        return s

    interior = _interior_estimate(field, total, y)
    if interior == NEG_INF:
        return AdmissibilityReport(
            admissible=False,
            trail=(),
            interior_estimate=NEG_INF,
            reason="no finite interior sample",
        )

    ks = np.arange(probe_levels + 1)
    trail: list[tuple[float, float]] = []
    ok = True
    reasons: list[str] = []
    for sign in (1.0, -1.0):
        ts = sign * np.power(2.0, ks)
        vals = total(ts)
        trail.extend(zip(ts.tolist(), vals.tolist()))
        tail = vals[-5:]
        below = bool(np.all(tail <= interior - 10.0))
        # -inf runs count as non-increasing.
        decreasing = all(
            b <= a + 1e-12 or (a == NEG_INF and b == NEG_INF)
            for a, b in zip(tail, tail[1:])
        )
        arrow = "+inf" if sign > 0 else "-inf"
        if not below:
            ok = False
            reasons.append(f"probes toward {arrow} stay above interior - 10")
        elif not decreasing:
            ok = False
            reasons.append(f"probes toward {arrow} are not decreasing")

    return AdmissibilityReport(
        admissible=ok,
        trail=tuple(trail),
        interior_estimate=float(interior),
        reason="; ".join(reasons) if reasons else "diverges on both probe trails",
    )


def _interior_estimate(field: Field, total, y: np.ndarray) -> float:
    sp = field.support_points
    if sp is not None:
        ts = np.array([x for x, _ in sp], dtype=float)
    else:
        reach = 2.0 + float(np.max(np.abs(y))) if y.size else 2.0
        ts = np.linspace(-reach, reach, 257)
    vals = total(ts)
    finite = vals[np.isfinite(vals)]
    if finite.size == 0:
        return NEG_INF
    return float(finite.max())
