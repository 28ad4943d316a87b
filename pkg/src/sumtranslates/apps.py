"""Applications of difference-map inversion: semi-axis problems, weighted
generalized-polynomial ratio targets, and log-concave product interpolation
(prescribed values at fixed points, or at the free maxima in the
Hermite-Fejer variant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Problem, difference_map
from .exceptions import FieldError, HypothesesError
from .fields import Field, discrete_field, is_admissible, semiaxis_field
from .kernels import Kernel, slope_limits
from .solver import SolveResult, invert_difference


@dataclass(frozen=True)
class InterpolationProblem:
    """Interpolate targets by C * w(t) * prod_j L_j(t - y_j), L_j = exp(K_j).

    ``factors`` are the kernels K_j (n of them), ``weight`` is the field
    J = log w.  ``targets`` holds the n+1 prescribed positive values.  In
    point mode the n+1 ``abscissae`` fix where values are prescribed; the
    Hermite-Fejer mode prescribes them at the product's own local maxima and
    ignores abscissae (they may be omitted).
    """

    factors: tuple[Kernel, ...]
    weight: Field
    targets: tuple[float, ...]
    abscissae: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        object.__setattr__(self, "targets", tuple(float(a) for a in self.targets))
        if len(self.factors) == 0:
            raise ValueError("need at least one factor kernel")
        if len(self.targets) != len(self.factors) + 1:
            raise ValueError(
                f"need {len(self.factors) + 1} targets for {len(self.factors)} factors"
            )
        for a in self.targets:
            if not (math.isfinite(a) and a > 0):
                raise ValueError("targets must be positive finite numbers")
        if self.abscissae is not None:
            xs = tuple(float(x) for x in self.abscissae)
            object.__setattr__(self, "abscissae", xs)
            if len(xs) != len(self.targets):
                raise ValueError("need as many abscissae as targets")
            for x1, x2 in zip(xs, xs[1:]):
                if not x1 < x2:
                    raise ValueError("abscissae must be strictly increasing")

    @property
    def n(self) -> int:
        return len(self.factors)


@dataclass(frozen=True, eq=False)
class InterpolationResult:
    """A realized interpolant: coefficient, factor translations, attained values.

    ``peaks`` holds the product's maximizer locations in Hermite-Fejer mode
    (None in point mode).  ``hypotheses_verified`` is False when the run was
    forced past an unverified strict-concavity claim.
    """

    coefficient: float
    nodes: np.ndarray
    peaks: np.ndarray | None
    achieved: np.ndarray
    residual: float
    hypotheses_verified: bool = True


def semiaxis_solve(problem: Problem, d_target, **options) -> SolveResult:
    """Difference-map inversion restricted to the positive semi-axis.

    The field is forced to -inf on (-inf, 0) (already-restricted fields pass
    through) and the inversion runs unchanged; regular configurations then
    necessarily place every node strictly inside (0, inf).
    """
    if problem.field.kind == "restrict_semiaxis":
        field = problem.field
    else:
        field = semiaxis_field(problem.field)
    restricted = Problem(
        kernels=problem.kernels,
        field=field,
        grid_density=problem.grid_density,
        refine_tol=problem.refine_tol,
    )
    result = invert_difference(restricted, d_target, **options)
    if result.nodes[0] <= 0:
        raise HypothesesError("semi-axis solve produced a non-positive node")
    return result


def weighted_poly_ratio_map(problem: Problem, y) -> np.ndarray:
    """Ratios of consecutive interval suprema of w(t) * prod_j |t-y_j|^(r_j).

    With K_j = r_j * log|.| and J = log w, the supremum of the weighted
    product over interval j is exp(m_j), so the ratio vector is exactly
    exp of the difference map.
    """
    return np.exp(difference_map(problem, y))


def _check_interpolation_hypotheses(ip: InterpolationProblem, allow_unverified: bool) -> bool:
    verified = True
    for j, k in enumerate(ip.factors):
        if not k.singular:
            raise HypothesesError(
                f"hypotheses of main theorem unmet: factor {j} is not singular"
            )
        if not slope_limits(k).gm_holds:
            raise HypothesesError(
                f"hypotheses of main theorem unmet: factor {j} has slope limits out of order"
            )
        if not k.strictly_concave_claimed:
            if not allow_unverified:
                raise HypothesesError(
                    f"hypotheses of main theorem unmet: factor {j} is not declared "
                    "strictly concave (pass allow_unverified=True to run anyway)"
                )
            verified = False
    verdict = is_admissible(ip.weight, ip.factors)
    if not verdict:
        raise HypothesesError(
            "hypotheses of main theorem unmet: weighted product does not vanish at "
            f"infinity ({verdict.reason})"
        )
    return verified


def log_concave_interpolate(
    ip: InterpolationProblem,
    *,
    tol: float = 1e-9,
    max_iter: int = 200,
    starts: int = 10,
    seed: int = 0,
    allow_unverified: bool = False,
) -> InterpolationResult:
    """Choose translations and a coefficient so the weighted product attains
    the targets at the given abscissae.

    Works on the discretized problem whose field is finite exactly at the
    abscissae (value log w there): the difference target is the vector of
    log target ratios, and regularity forces the translations to interlace
    the abscissae strictly.
    """
    if ip.abscissae is None:
        raise ValueError("point interpolation needs abscissae")
    verified = _check_interpolation_hypotheses(ip, allow_unverified)

    log_w = [float(ip.weight.evaluate(x)) for x in ip.abscissae]
    if not all(math.isfinite(v) for v in log_w):
        raise FieldError("weight must be positive at every abscissa")
    field = discrete_field(list(zip(ip.abscissae, log_w)))
    problem = Problem(kernels=ip.factors, field=field)
    alphas = np.asarray(ip.targets, dtype=float)
    d_target = np.diff(np.log(alphas))

    result = invert_difference(
        problem,
        d_target,
        tol=tol,
        max_iter=max_iter,
        starts=starts,
        seed=seed,
        hypotheses_override=not verified,
    )

    values = result.report.values
    coefficient = float(alphas[0] / math.exp(values[0]))
    achieved = coefficient * np.exp(values)
    return InterpolationResult(
        coefficient=coefficient,
        nodes=result.nodes,
        peaks=None,
        achieved=achieved,
        residual=result.residual,
        hypotheses_verified=verified,
    )


def hermite_fejer_interpolate(
    ip: InterpolationProblem,
    *,
    tol: float = 1e-9,
    max_iter: int = 200,
    starts: int = 10,
    seed: int = 0,
    allow_unverified: bool = False,
) -> InterpolationResult:
    """Choose translations so the weighted product's own local maxima attain
    the targets; the maximizer locations come out of the solve.

    Same inversion as point interpolation but over the continuous weight
    field: the attained maxima interlace the translations strictly.
    """
    verified = _check_interpolation_hypotheses(ip, allow_unverified)
    problem = Problem(kernels=ip.factors, field=ip.weight)
    alphas = np.asarray(ip.targets, dtype=float)
    d_target = np.diff(np.log(alphas))

    result = invert_difference(
        problem,
        d_target,
        tol=tol,
        max_iter=max_iter,
        starts=starts,
        seed=seed,
        hypotheses_override=not verified,
    )

    values = result.report.values
    coefficient = float(alphas[0] / math.exp(values[0]))
    achieved = coefficient * np.exp(values)
    return InterpolationResult(
        coefficient=coefficient,
        nodes=result.nodes,
        peaks=result.report.locations.copy(),
        achieved=achieved,
        residual=result.residual,
        hypotheses_verified=verified,
    )
