"""Half-axis solving, ratio maps, and log-concave interpolation."""

import dataclasses
import math

import numpy as np
import pytest

import sumtranslates as st
from conftest import bisect, log_like_table_kernel, random_regular_nodes

E = math.e

# --- frozen oracles ----------------------------------------------------------
#
# Two-point interpolation of (1, 2) at x = (-1, 1) by G(t) = C e^{-|t|} |t - y|:
# the ratio G(1)/G(-1) = (1 - y)/(1 + y) must equal 2, so y = -1/3, and
# G(-1) = C e^{-1} (2/3) = 1 gives C = 1.5 e.
TWO_POINT_RATIO_NODE = -1.0 / 3.0
TWO_POINT_RATIO_COEFF = 1.5 * E

# Unit-target interpolation at the curve's own maxima with weight e^{-t^2}
# and one |t| factor at y = 0: stationarity of -t^2 + log t gives the peak
# at t = 1/sqrt(2), and C e^{-1/2} / sqrt(2) = 1 gives C = sqrt(2) e^{1/2}.
PEAK_ABSCISSA = 1.0 / math.sqrt(2.0)
PEAK_COEFF = math.sqrt(2.0) * math.exp(0.5)
assert abs(PEAK_COEFF - 2.331643981597124) < 1e-15

# Half-axis problem J = -t on [0, inf), one log kernel: for 0 < y < 1 the
# left interval [0, y] has its maximum at t = 0 with value log y, and the
# right one at t = y + 1 with value -(y + 1), so d(y) = -1 - y - log y.
SEMIAXIS_NODE_FOR_HALF = bisect(lambda s: -1.0 - s - math.log(s) + 0.5, 0.05, 1.0)
assert abs(SEMIAXIS_NODE_FOR_HALF - 0.40467385) < 1e-7


def _interp_problem(targets, abscissae=(-1.0, 1.0)):
    return st.InterpolationProblem(
        factors=(st.log_kernel(),),
        weight=st.neg_abs_field(),
        targets=targets,
        abscissae=abscissae,
    )


class TestInterpolationProblemValidation:
    def test_target_count(self):
        with pytest.raises(ValueError):
            st.InterpolationProblem(
                factors=(st.log_kernel(),), weight=st.neg_abs_field(), targets=(1.0,)
            )

    def test_targets_positive(self):
        with pytest.raises(ValueError):
            _interp_problem((1.0, -2.0))
        with pytest.raises(ValueError):
            _interp_problem((0.0, 1.0))

    def test_abscissae_sorted_and_matching(self):
        with pytest.raises(ValueError):
            _interp_problem((1.0, 1.0), abscissae=(1.0, -1.0))
        with pytest.raises(ValueError):
            _interp_problem((1.0, 1.0), abscissae=(0.0, 1.0, 2.0))


class TestPointInterpolation:
    def test_symmetric_targets(self):
        res = st.log_concave_interpolate(_interp_problem((1.0, 1.0)))
        assert res.coefficient == pytest.approx(E, abs=1e-6)
        assert abs(float(res.nodes[0])) <= 1e-8
        np.testing.assert_allclose(res.achieved, [1.0, 1.0], rtol=1e-8)
        assert res.hypotheses_verified

    def test_doubled_second_target(self):
        res = st.log_concave_interpolate(_interp_problem((1.0, 2.0)))
        assert float(res.nodes[0]) == pytest.approx(TWO_POINT_RATIO_NODE, abs=1e-5)
        assert res.coefficient == pytest.approx(TWO_POINT_RATIO_COEFF, abs=1e-5)
        np.testing.assert_allclose(res.achieved, [1.0, 2.0], rtol=1e-8)

    def test_scaling_law(self):
        base = st.log_concave_interpolate(_interp_problem((1.0, 2.0)))
        scaled = st.log_concave_interpolate(_interp_problem((3.0, 6.0)))
        np.testing.assert_allclose(scaled.nodes, base.nodes, atol=1e-9)
        assert scaled.coefficient == pytest.approx(3.0 * base.coefficient, rel=1e-9)

    def test_interlacing_and_reconstruction(self):
        rng = np.random.default_rng(29)
        for _ in range(5):
            xs = np.sort(rng.uniform(-2.0, 2.0, size=3))
            while np.min(np.diff(xs)) < 0.2:
                xs = np.sort(rng.uniform(-2.0, 2.0, size=3))
            alphas = rng.uniform(0.5, 2.0, size=3)
            ip = st.InterpolationProblem(
                factors=(st.log_kernel(), st.log_kernel()),
                weight=st.neg_square_field(),
                targets=tuple(alphas),
                abscissae=tuple(xs),
            )
            res = st.log_concave_interpolate(ip)
            # Nodes interlace the abscissae strictly.
            assert xs[0] < res.nodes[0] < xs[1] < res.nodes[1] < xs[2]
            # Direct reconstruction from the returned parameters.
            for x, a in zip(xs, alphas):
                g = res.coefficient * math.exp(
                    st.evaluate_sum(
                        st.Problem(kernels=ip.factors, field=ip.weight), res.nodes, x
                    )
                )
                assert g == pytest.approx(a, rel=1e-8)

    def test_abscissae_required(self):
        ip = st.InterpolationProblem(
            factors=(st.log_kernel(),), weight=st.neg_abs_field(), targets=(1.0, 1.0)
        )
        with pytest.raises(ValueError):
            st.log_concave_interpolate(ip)

    def test_weight_must_be_positive_at_abscissae(self):
        ip = st.InterpolationProblem(
            factors=(st.log_kernel(),),
            weight=st.semiaxis_field(st.neg_abs_field()),
            targets=(1.0, 1.0),
            abscissae=(-1.0, 1.0),  # weight vanishes at -1
        )
        with pytest.raises(st.FieldError, match="positive at every abscissa"):
            st.log_concave_interpolate(ip)


class TestInterpolationHypotheses:
    def test_non_singular_factor_rejected(self):
        ip = st.InterpolationProblem(
            factors=(log_like_table_kernel(),),
            weight=st.neg_square_field(),
            targets=(1.0, 1.0),
            abscissae=(-1.0, 1.0),
        )
        with pytest.raises(st.HypothesesError, match="hypotheses of main theorem unmet"):
            st.log_concave_interpolate(ip)

    def test_unverified_strictness_needs_opt_in(self):
        soft = dataclasses.replace(st.log_kernel(), strictly_concave_claimed=False)
        ip = st.InterpolationProblem(
            factors=(soft,),
            weight=st.neg_square_field(),
            targets=(1.0, 1.0),
            abscissae=(-1.0, 1.0),
        )
        with pytest.raises(st.HypothesesError):
            st.log_concave_interpolate(ip)
        res = st.log_concave_interpolate(ip, allow_unverified=True)
        assert not res.hypotheses_verified
        # Symmetric targets at +-1 with the Gaussian weight: y = 0 and
        # C e^{-1} |1 - 0| = 1, so C = e.
        assert res.coefficient == pytest.approx(E, abs=1e-6)

    def test_non_vanishing_product_rejected(self):
        flat = st.table_field([(-1.0, 0.0), (1.0, 0.0)])
        ip = st.InterpolationProblem(
            factors=(st.log_kernel(),),
            weight=flat,
            targets=(1.0, 1.0),
            abscissae=(-1.0, 1.0),
        )
        with pytest.raises(st.HypothesesError, match="vanish at infinity"):
            st.log_concave_interpolate(ip)


class TestHermiteFejer:
    def test_symmetric_closed_form(self):
        ip = st.InterpolationProblem(
            factors=(st.log_kernel(),), weight=st.neg_square_field(), targets=(1.0, 1.0)
        )
        res = st.hermite_fejer_interpolate(ip)
        assert abs(float(res.nodes[0])) <= 1e-8
        np.testing.assert_allclose(
            res.peaks, [-PEAK_ABSCISSA, PEAK_ABSCISSA], atol=1e-5
        )
        assert res.coefficient == pytest.approx(PEAK_COEFF, abs=1e-5)
        np.testing.assert_allclose(res.achieved, [1.0, 1.0], rtol=1e-6)

    def test_scaling_law(self):
        ip = st.InterpolationProblem(
            factors=(st.log_kernel(),), weight=st.neg_square_field(), targets=(2.0, 2.0)
        )
        res = st.hermite_fejer_interpolate(ip)
        assert res.coefficient == pytest.approx(2.0 * PEAK_COEFF, abs=2e-5)
        np.testing.assert_allclose(res.peaks, [-PEAK_ABSCISSA, PEAK_ABSCISSA], atol=1e-5)

    def test_asymmetric_targets_interlace(self):
        ip = st.InterpolationProblem(
            factors=(st.log_kernel(),), weight=st.neg_square_field(), targets=(1.0, 2.0)
        )
        res = st.hermite_fejer_interpolate(ip)
        assert float(res.nodes[0]) < 0.0
        assert res.peaks[0] < res.nodes[0] < res.peaks[1]
        # The product actually attains the prescribed values at the peaks.
        p = st.Problem(kernels=ip.factors, field=ip.weight)
        for z, a in zip(res.peaks, (1.0, 2.0)):
            g = res.coefficient * math.exp(st.evaluate_sum(p, res.nodes, float(z)))
            assert g == pytest.approx(a, rel=1e-6)


class TestSemiaxis:
    def test_worked_half_target(self):
        p = st.Problem(kernels=(st.log_kernel(),), field=st.neg_abs_field())
        res = st.semiaxis_solve(p, [-0.5])
        assert float(res.nodes[0]) == pytest.approx(SEMIAXIS_NODE_FOR_HALF, abs=1e-7)
        assert float(res.nodes[0]) > 0.0
        # Left maximum sits at the boundary t = 0 with value log y.
        assert res.report.values[0] == pytest.approx(
            math.log(SEMIAXIS_NODE_FOR_HALF), abs=1e-6
        )
        assert res.report.values[1] == pytest.approx(
            -1.0 - SEMIAXIS_NODE_FOR_HALF, abs=1e-6
        )

    def test_equals_manual_restriction(self):
        rng = np.random.default_rng(31)
        base = st.Problem(kernels=(st.log_kernel(),), field=st.neg_abs_field())
        manual = st.Problem(
            kernels=base.kernels, field=st.semiaxis_field(st.neg_abs_field())
        )
        for _ in range(5):
            d = [float(rng.uniform(-1.5, 0.5))]
            a = st.semiaxis_solve(base, d)
            b = st.invert_difference(manual, d)
            np.testing.assert_allclose(a.nodes, b.nodes, atol=1e-10)

    def test_already_restricted_field_accepted(self):
        p = st.Problem(
            kernels=(st.log_kernel(),), field=st.semiaxis_field(st.neg_abs_field())
        )
        res = st.semiaxis_solve(p, [-0.5])
        assert float(res.nodes[0]) == pytest.approx(SEMIAXIS_NODE_FOR_HALF, abs=1e-7)


class TestRatioMap:
    def test_worked_value(self, unit_log_problem):
        np.testing.assert_allclose(
            st.weighted_poly_ratio_map(unit_log_problem, [0.5]), [math.exp(-1.0)], rtol=1e-9
        )

    def test_is_exp_of_difference_map(self):
        rng = np.random.default_rng(37)
        p = st.Problem(
            kernels=(st.log_kernel(2.0), st.log_kernel()), field=st.neg_square_field()
        )
        for _ in range(5):
            y = random_regular_nodes(rng, 2)
            np.testing.assert_allclose(
                st.weighted_poly_ratio_map(p, y),
                np.exp(st.difference_map(p, y)),
                rtol=1e-12,
            )

    def test_against_direct_supremum_ratio(self):
        # Independent check: ratios of suprema of |t-y1|^2 |t-y2| e^{-t^2}
        # over the node-cut intervals, computed on a dense grid.
        p = st.Problem(
            kernels=(st.log_kernel(2.0), st.log_kernel()), field=st.neg_square_field()
        )
        y = np.array([-0.4, 0.7])
        ratios = st.weighted_poly_ratio_map(p, y)

        def product(t):
            return np.abs(t + 0.4) ** 2 * np.abs(t - 0.7) * np.exp(-(t**2))

        cuts = [-8.0, -0.4, 0.7, 8.0]
        sups = [
            np.max(product(np.linspace(a, b, 400001))) for a, b in zip(cuts, cuts[1:])
        ]
        expected = [sups[1] / sups[0], sups[2] / sups[1]]
        np.testing.assert_allclose(ratios, expected, rtol=1e-6)
