"""Concave kernel functions on the punctured real axis.

A kernel here is a function that is concave on (-inf, 0) and on (0, inf)
and has equal one-sided limits at 0; the value at 0 is that common limit.
Singular kernels take the value -inf at 0.  Extended-real arithmetic is
plain float arithmetic with ``float("-inf")``: (-inf) + x = -inf, and +inf
never arises because every kernel and field is bounded above on compacts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import KernelError

NEG_INF = float("-inf")

_KERNEL_KINDS = ("log_abs", "log_abs_plus_linear", "table")

# Tolerance for slope-monotonicity checks on table knots.  Slopes computed
# from user-supplied knots carry rounding of order eps/|spacing|.
_SLOPE_TOL = 1e-12


@dataclass(frozen=True)
class SlopeLimits:
    """One-sided derivative limits of a kernel at -inf and +inf."""

    at_minus_infinity: float
    at_plus_infinity: float

    @property
    def gm_holds(self) -> bool:
        """True when the slope towards -inf does not exceed the one towards +inf.

        Both limits are finite whenever this holds for the kernels built here.
        """
        return self.at_minus_infinity <= self.at_plus_infinity


@dataclass(frozen=True)
class Kernel:
    """A concave kernel, one of the supported kinds.

    Use :func:`log_kernel`, :func:`log_linear_kernel` or :func:`table_kernel`
    to build instances; the constructor itself performs no validation.
    """

    kind: str
    weight: float = 1.0
    slope: float = 0.0
    neg_knots: tuple[tuple[float, float], ...] | None = None
    pos_knots: tuple[tuple[float, float], ...] | None = None
    end_slopes: tuple[float, float] | None = None
    # Slopes of the knot segments adjacent to 0, used to extend tables
    # linearly on the gap between the innermost knots and 0.
    inner_slopes: tuple[float, float] | None = None
    singular: bool = True
    strictly_concave_claimed: bool = True
    zero_limit: float | None = field(default=NEG_INF)

    def evaluate(self, t):
        """Evaluate at a float or ndarray; -inf marks the singularity."""
        if self.kind == "log_abs":
            with np.errstate(divide="ignore"):
                return self.weight * np.log(np.abs(t))
        if self.kind == "log_abs_plus_linear":
            with np.errstate(divide="ignore"):
                return self.weight * np.log(np.abs(t)) + self.slope * np.asarray(t, dtype=float)
        return self._evaluate_table(t)

    def _evaluate_table(self, t):
        scalar = np.isscalar(t) or getattr(t, "ndim", 0) == 0
        u = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty_like(u)

        neg = u < 0.0
        pos = u > 0.0
        zero = u == 0.0
        if neg.any():
            out[neg] = _half_axis_eval(
                self.neg_knots, self.end_slopes[0], self.inner_slopes[0], True, u[neg]
            )
        if pos.any():
            out[pos] = _half_axis_eval(
                self.pos_knots, self.end_slopes[1], self.inner_slopes[1], False, u[pos]
            )
        if zero.any():
            if self.zero_limit is None:
                raise KernelError("kernel undefined at 0")
            out[zero] = self.zero_limit
        return float(out[0]) if scalar else out


def _half_axis_eval(knots, outer_slope, inner_slope, neg_side, u):
    """Piecewise-linear evaluation on one half-axis with linear extensions."""
    xs = np.array([k[0] for k in knots], dtype=float)
    vs = np.array([k[1] for k in knots], dtype=float)
    out = np.interp(u, xs, vs)
    if neg_side:
        below = u < xs[0]
        above = u > xs[-1]
        out = np.where(below, vs[0] + outer_slope * (u - xs[0]), out)
        out = np.where(above, vs[-1] + inner_slope * (u - xs[-1]), out)
    else:
        below = u < xs[0]
        above = u > xs[-1]
        out = np.where(below, vs[0] + inner_slope * (u - xs[0]), out)
        out = np.where(above, vs[-1] + outer_slope * (u - xs[-1]), out)
    return out


def log_kernel(weight: float = 1.0) -> Kernel:
    """K(t) = weight * log|t|, the singular prototype."""
    _require_positive_weight(weight)
    return Kernel(kind="log_abs", weight=float(weight))


def log_linear_kernel(weight: float = 1.0, slope: float = 0.0) -> Kernel:
    """K(t) = weight * log|t| + slope * t."""
    _require_positive_weight(weight)
    if not math.isfinite(slope):
        raise KernelError("slope must be finite")
    return Kernel(kind="log_abs_plus_linear", weight=float(weight), slope=float(slope))


def _require_positive_weight(weight: float) -> None:
    if not (math.isfinite(weight) and weight > 0):
        raise KernelError("weight must be a positive finite number")


def table_kernel(
    neg_knots,
    pos_knots,
    end_slopes=None,
    strictly_concave: bool = False,
) -> Kernel:
    """Piecewise-linear kernel from knot tables, one table per half-axis.

    Knots are (t, value) pairs, strictly increasing in t, negative t on the
    first table and positive t on the second.  Beyond the outermost knots the
    kernel continues linearly with ``end_slopes`` (derived from the outermost
    segments when omitted, which then needs at least 2 knots per side).
    Between the innermost knots and 0 it continues with the adjacent segment
    slope, so a table kernel always has finite one-sided limits at 0 and is
    never singular.  Segment slopes must be non-increasing in t on each
    half-axis, end slopes included, or the table is not concave.
    """
    neg = _validated_half(neg_knots, negative=True)
    pos = _validated_half(pos_knots, negative=False)

    neg_seg = _segment_slopes(neg)
    pos_seg = _segment_slopes(pos)

    if end_slopes is None:
        if len(neg) < 2 or len(pos) < 2:
            raise KernelError("insufficient knots")
        end_slopes = (neg_seg[0], pos_seg[-1])
    else:
        end_slopes = (float(end_slopes[0]), float(end_slopes[1]))
        if not all(math.isfinite(s) for s in end_slopes):
            raise KernelError("end slopes must be finite")

    # Inner extensions: reuse the segment nearest 0, or fall back to the end
    # slope when a side has a single knot (the side is then one straight line).
    inner_neg = neg_seg[-1] if neg_seg else end_slopes[0]
    inner_pos = pos_seg[0] if pos_seg else end_slopes[1]

    _check_concave_side("negative", [end_slopes[0], *neg_seg])
    _check_concave_side("positive", [*pos_seg, end_slopes[1]])

    lim_neg = neg[-1][1] + inner_neg * (0.0 - neg[-1][0])
    lim_pos = pos[0][1] + inner_pos * (0.0 - pos[0][0])
    scale = max(1.0, abs(lim_neg), abs(lim_pos))
    zero_limit = 0.5 * (lim_neg + lim_pos) if abs(lim_neg - lim_pos) <= 1e-9 * scale else None

    return Kernel(
        kind="table",
        neg_knots=neg,
        pos_knots=pos,
        end_slopes=end_slopes,
        inner_slopes=(inner_neg, inner_pos),
        singular=False,
        strictly_concave_claimed=bool(strictly_concave),
        zero_limit=zero_limit,
    )


def _validated_half(knots, negative: bool):
    knots = tuple((float(t), float(v)) for t, v in knots)
    if not knots:
        raise KernelError("insufficient knots")
    side = "negative" if negative else "positive"
    last = None
    for t, v in knots:
        if not (math.isfinite(t) and math.isfinite(v)):
            raise KernelError(f"{side} half-axis knots must be finite")
        if negative and t >= 0 or not negative and t <= 0:
            raise KernelError(f"{side} half-axis knots must have {side} positions")
        if last is not None and t <= last:
            raise KernelError(f"{side} half-axis knots must be strictly increasing")
        last = t
    return knots


def _segment_slopes(knots):
    return [
        (v2 - v1) / (t2 - t1) for (t1, v1), (t2, v2) in zip(knots, knots[1:])
    ]


def _check_concave_side(side: str, slopes) -> None:
    for s1, s2 in zip(slopes, slopes[1:]):
        if s2 > s1 + _SLOPE_TOL:
            raise KernelError(
                f"{side} half-axis is not concave: slope rises from {s1:.12g} to {s2:.12g}"
            )


def eval_kernel(kernel: Kernel, t: float) -> float:
    """Evaluate at one point; -inf at 0 for singular kernels.

    Non-singular table kernels whose one-sided limits at 0 disagree raise
    ``KernelError("kernel undefined at 0")`` when asked for t = 0.
    """
    t = float(t)
    if t == 0.0:
        if kernel.singular:
            return NEG_INF
        if kernel.zero_limit is None:
            raise KernelError("kernel undefined at 0")
        return kernel.zero_limit
    return float(kernel.evaluate(t))


def slope_limits(kernel: Kernel) -> SlopeLimits:
    """Derivative limits at -inf and +inf (closed forms for built-in kinds)."""
    if kernel.kind == "log_abs":
        return SlopeLimits(0.0, 0.0)
    if kernel.kind == "log_abs_plus_linear":
        return SlopeLimits(kernel.slope, kernel.slope)
    if kernel.end_slopes is None:
        raise KernelError("insufficient knots")
    return SlopeLimits(kernel.end_slopes[0], kernel.end_slopes[1])


@dataclass(frozen=True)
class ShiftViolation:
    """One sampled tuple where a shift inequality failed."""

    part: int
    t1: float
    t2: float
    h: float
    lhs: float
    rhs: float

    @property
    def excess(self) -> float:
        return self.lhs - self.rhs


@dataclass(frozen=True)
class ShiftCheckReport:
    """Outcome of sampled shift-inequality checks for one kernel."""

    violations: tuple[ShiftViolation, ...]
    samples: int
    part2_checked: bool
    note: str = ""

    @property
    def ok(self) -> bool:
        return not self.violations


def check_shift_inequalities(
    kernel: Kernel, sample_count: int = 1000, seed: int = 0
) -> ShiftCheckReport:
    """Sample the two shift inequalities that concavity and slope order imply.

    Part 1 (same side of 0, shift away from 0): for 0 < t1 < t2 and h > 0,
        K(t2 + h) - K(t1 + h) <= K(t2) - K(t1),
    and the mirror image on the negative half-axis.  Part 2 (across 0): when
    the slope limit at -inf does not exceed the one at +inf and
    t1 < t1 + h < 0 < t2,
        K(t2) - K(t1) <= K(t2 + h) - K(t1 + h).
    Part 2 is skipped (with a note) when that slope condition fails.
    Violations beyond 1e-12 are recorded with the offending tuple.
    """
    if sample_count < 1:
        raise KernelError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    gm = slope_limits(kernel).gm_holds
    violations: list[ShiftViolation] = []

    def check(part, t1, t2, h, lhs, rhs):
        if lhs > rhs + 1e-12:
            violations.append(ShiftViolation(part, t1, t2, h, lhs, rhs))

    for _ in range(sample_count):
        a, b, c = 10.0 ** rng.uniform(-3.0, 1.0, size=3)

        # Positive side: 0 < t1 < t2, shift right by h.
        t1, t2, h = a, a + b, c
        lhs = eval_kernel(kernel, t2 + h) - eval_kernel(kernel, t1 + h)
        rhs = eval_kernel(kernel, t2) - eval_kernel(kernel, t1)
        check(1, t1, t2, h, lhs, rhs)

        # Negative side: t1 < t2 < t2 + h < 0.
        t2 = -a - c
        t1 = t2 - b
        h = c
        lhs = eval_kernel(kernel, t2 + h) - eval_kernel(kernel, t1 + h)
        rhs = eval_kernel(kernel, t2) - eval_kernel(kernel, t1)
        check(1, t1, t2, h, lhs, rhs)

        # Across 0: t1 < t1 + h < 0 < t2.
        if gm:
            t1 = -a - b
            h = b
            t2 = c
            lhs = eval_kernel(kernel, t2) - eval_kernel(kernel, t1)
            rhs = eval_kernel(kernel, t2 + h) - eval_kernel(kernel, t1 + h)
            check(2, t1, t2, h, lhs, rhs)

    note = "" if gm else "slope limits out of order; part-2 checks skipped"
    return ShiftCheckReport(
        violations=tuple(violations),
        samples=sample_count,
        part2_checked=gm,
        note=note,
    )
