"""Brute-force grid oracle: independent maxima scans and low-dimensional inversion."""

import math

import numpy as np
import pytest

import sumtranslates as st
from test_solver import TWO_NODE_HALF_GAP


class TestGridSpec:
    def test_positive_parameters_required(self):
        with pytest.raises(ValueError):
            st.GridSpec(step=0.0, extent=1.0)
        with pytest.raises(ValueError):
            st.GridSpec(step=1e-3, extent=-1.0)


class TestGridLocalMaxima:
    def test_worked_single_node(self, unit_log_problem):
        spec = st.GridSpec(step=1e-3, extent=4.0)
        rep = st.grid_local_maxima(unit_log_problem, [0.5], spec)
        # +-0.5 and 1.5 sit exactly on the lattice, so the scan is exact here.
        np.testing.assert_allclose(rep.values, [-0.5, -1.5], atol=1e-12)
        np.testing.assert_allclose(rep.locations, [-0.5, 1.5], atol=1e-12)
        assert rep.truncation_radius == 4.0

    def test_off_lattice_node_agrees_with_refined_scan(self, unit_log_problem):
        spec = st.GridSpec(step=1e-3, extent=4.0)
        y = [0.5003]
        coarse = st.grid_local_maxima(unit_log_problem, y, spec)
        fine = st.local_maxima(unit_log_problem, y)
        np.testing.assert_allclose(coarse.values, fine.values, atol=5e-3)
        np.testing.assert_allclose(coarse.locations, fine.locations, atol=5e-3)

    def test_discrete_field_is_exact(self):
        f = st.discrete_field([(-1.0, 0.5), (0.0, -0.25), (2.0, 1.0)])
        p = st.Problem(kernels=(st.log_kernel(),), field=f)
        spec = st.GridSpec(step=1e-2, extent=5.0)
        a = st.grid_local_maxima(p, [0.5], spec)
        b = st.local_maxima(p, [0.5])
        np.testing.assert_array_equal(a.values, b.values)
        np.testing.assert_array_equal(a.locations, b.locations)

    def test_matches_core_on_random_problems(self):
        rng = np.random.default_rng(17)
        p = st.Problem(
            kernels=(st.log_kernel(), st.log_kernel(1.4)), field=st.neg_square_field()
        )
        spec = st.GridSpec(step=1e-3, extent=6.0)
        for _ in range(5):
            y = np.sort(rng.uniform(-1.5, 1.5, size=2))
            if np.diff(y)[0] < 0.05:
                continue
            a = st.grid_local_maxima(p, y, spec)
            b = st.local_maxima(p, y)
            np.testing.assert_allclose(a.values, b.values, atol=1e-4)


class TestGridInvert:
    def test_single_node_target(self, unit_log_problem):
        spec = st.GridSpec(step=1e-3, extent=4.0)
        y, residual = st.grid_invert(unit_log_problem, [-1.0], spec)
        assert abs(float(y[0]) - 0.5) <= 2e-3
        assert residual <= 5e-3

    def test_two_node_equioscillation_target(self, two_log_gaussian_problem):
        spec = st.GridSpec(step=1e-3, extent=3.0)
        y, residual = st.grid_invert(two_log_gaussian_problem, [0.0, 0.0], spec)
        np.testing.assert_allclose(
            y, [-TWO_NODE_HALF_GAP, TWO_NODE_HALF_GAP], atol=2e-3
        )
        assert residual <= 1e-2

    def test_agrees_with_solver(self, unit_log_problem):
        spec = st.GridSpec(step=1e-3, extent=4.0)
        for d in (-0.5, -1.0, 0.75):
            y_grid, _ = st.grid_invert(unit_log_problem, [d], spec)
            y_solver = st.invert_difference(unit_log_problem, [d]).nodes
            assert abs(float(y_grid[0]) - float(y_solver[0])) <= 2e-3

    def test_dimension_cap(self):
        p = st.Problem(
            kernels=(st.log_kernel(), st.log_kernel(), st.log_kernel()),
            field=st.neg_square_field(),
        )
        with pytest.raises(ValueError):
            st.grid_invert(p, [0.0, 0.0, 0.0], st.GridSpec(step=1e-2, extent=3.0))

    def test_target_arity_checked(self, two_log_gaussian_problem):
        with pytest.raises(ValueError, match="target length 1 != 2"):
            st.grid_invert(two_log_gaussian_problem, [0.0], st.GridSpec(step=1e-2, extent=3.0))

    def test_window_restricts_the_search(self, unit_log_problem):
        spec = st.GridSpec(step=1e-3, extent=4.0)
        y, _ = st.grid_invert(unit_log_problem, [-1.0], spec, window=2.0)
        assert abs(float(y[0]) - 0.5) <= 2e-3
