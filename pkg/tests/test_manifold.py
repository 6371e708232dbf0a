import math

import numpy as np
import pytest

from ssls.core import ProblemInstance
from ssls.manifold import (MatrixInstance, Orientation, check_oblique,
                           gpg_solve_matrix, gradient_p, lipschitz_bound_matrix,
                           objective_p)
from ssls.solver import GpgParams, Termination, _column_prox, gpg_solve
from ssls.prox import ProxInput, prox_sphere_l1

from helpers import fd_gradient_matrix

from test_solver import assert_descent_invariants


def column_instance(rng, m, n, r):
    return MatrixInstance(rng.normal(size=(m, n)), rng.normal(size=(m, r)),
                          Orientation.COLUMN_STOCHASTIC)


def unit_columns(rng, n, r):
    y = rng.normal(size=(n, r))
    return y / np.linalg.norm(y, axis=0, keepdims=True)


class TestInstanceConstruction:
    def test_row_defaults_target_to_data(self):
        d = np.array([[0.25, 0.25, 0.5]])
        inst = MatrixInstance(d, orientation=Orientation.ROW_STOCHASTIC)
        assert np.array_equal(inst.b, d)
        assert inst.unknown_shape == (3, 3)

    def test_column_requires_target(self):
        with pytest.raises(ValueError):
            MatrixInstance(np.eye(2), orientation=Orientation.COLUMN_STOCHASTIC)

    def test_row_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            MatrixInstance(np.ones((1, 3)), np.ones((2, 3)),
                           Orientation.ROW_STOCHASTIC)

    def test_gram_cache(self):
        rng = np.random.default_rng(0)
        inst = column_instance(rng, 4, 5, 2)
        assert np.array_equal(inst.ata, inst.a.T @ inst.a)
        assert np.array_equal(inst.atb, inst.a.T @ inst.b)


class TestGradient:
    def test_zero_iterate(self):
        rng = np.random.default_rng(1)
        inst = column_instance(rng, 4, 4, 3)
        assert np.array_equal(gradient_p(inst, np.zeros((4, 3))), np.zeros((4, 3)))

    def test_exact_fit_has_zero_gradient(self):
        rng = np.random.default_rng(2)
        y = unit_columns(rng, 4, 2)
        inst = MatrixInstance(np.eye(4), y * y, Orientation.COLUMN_STOCHASTIC)
        assert np.allclose(gradient_p(inst, y), 0.0, atol=1e-14)

    def test_matches_finite_differences_column(self):
        rng = np.random.default_rng(3)
        inst = column_instance(rng, 4, 4, 4)
        y = unit_columns(rng, 4, 4)
        g = gradient_p(inst, y)
        g_fd = fd_gradient_matrix(lambda v: objective_p(inst, v), y)
        assert np.linalg.norm(g - g_fd) <= 1e-6 * np.linalg.norm(g)

    def test_matches_finite_differences_row(self):
        rng = np.random.default_rng(4)
        d = rng.normal(size=(2, 4))
        inst = MatrixInstance(d, orientation=Orientation.ROW_STOCHASTIC)
        y = unit_columns(rng, 4, 4).T  # unit rows
        g = gradient_p(inst, y)
        g_fd = fd_gradient_matrix(lambda v: objective_p(inst, v), y)
        assert np.linalg.norm(g - g_fd) <= 1e-6 * np.linalg.norm(g)

    def test_shape_mismatch_rejected(self):
        rng = np.random.default_rng(5)
        inst = column_instance(rng, 4, 5, 2)
        with pytest.raises(ValueError):
            gradient_p(inst, np.zeros((5, 3)))


class TestLipschitzMatrix:
    def test_identity_column_case(self):
        inst = MatrixInstance(np.eye(2), np.zeros((2, 1)),
                              Orientation.COLUMN_STOCHASTIC)
        assert lipschitz_bound_matrix(inst) == pytest.approx(12.0, rel=1e-9)

    def test_identity_row_case(self):
        inst = MatrixInstance(np.eye(2), orientation=Orientation.ROW_STOCHASTIC)
        expected = 12.0 + 2.0 * math.sqrt(2.0)
        assert lipschitz_bound_matrix(inst) == pytest.approx(expected, rel=1e-9)

    def test_gradient_pairs_bounded(self):
        rng = np.random.default_rng(6)
        inst = column_instance(rng, 4, 6, 3)
        lip = lipschitz_bound_matrix(inst)
        for _ in range(1000):
            y1 = unit_columns(rng, 6, 3) * rng.random(3)
            y2 = unit_columns(rng, 6, 3) * rng.random(3)
            num = np.linalg.norm(gradient_p(inst, y1) - gradient_p(inst, y2))
            den = np.linalg.norm(y1 - y2)
            assert num <= lip * den + 1e-12


class TestObliqueChecks:
    def test_column_orientation(self):
        rng = np.random.default_rng(7)
        y = unit_columns(rng, 5, 3)
        assert check_oblique(y, Orientation.COLUMN_STOCHASTIC)
        assert not check_oblique(2.0 * y, Orientation.COLUMN_STOCHASTIC)

    def test_row_orientation(self):
        rng = np.random.default_rng(8)
        y = unit_columns(rng, 5, 5).T
        assert check_oblique(y, Orientation.ROW_STOCHASTIC)
        assert not check_oblique(y + 0.5, Orientation.ROW_STOCHASTIC)


class TestMatrixSolve:
    def test_r1_matches_vector_solver_bitwise(self):
        rng = np.random.default_rng(9)
        a = rng.normal(size=(6, 10))
        b = rng.normal(size=6)
        y0 = rng.normal(size=10)
        y0 /= np.linalg.norm(y0)
        # explicit gamma1: the two entry points use different default
        # Lipschitz constants, everything else is the same code path
        params = GpgParams(alpha0=0.5, lambda0=1e-2, gamma1=1e-4, tol=1e-7,
                           it_max=300)
        rv = gpg_solve(ProblemInstance(a, b), params, y0)
        rm = gpg_solve_matrix(
            MatrixInstance(a, b[:, None], Orientation.COLUMN_STOCHASTIC),
            params, y0[:, None])
        assert np.array_equal(rv.x, rm.x[:, 0])
        assert np.array_equal(rv.y, rm.y[:, 0])
        assert np.array_equal(rv.f_history, rm.f_history)
        assert np.array_equal(rv.lambda_history, rm.lambda_history)
        assert rv.iterations == rm.iterations

    def test_prox_step_separates_across_columns(self):
        rng = np.random.default_rng(10)
        inst = column_instance(rng, 5, 6, 4)
        y = unit_columns(rng, 6, 4)
        g = gradient_p(inst, y)
        alpha, lam = 0.3, 5e-3
        stacked, _ = _column_prox(y, g, alpha, lam)
        for j in range(4):
            sol = prox_sphere_l1(ProxInput(d=y[:, j], grad=g[:, j],
                                           alpha=alpha, lam=lam))
            assert np.array_equal(stacked[:, j], sol.y)

    def test_column_stochastic_output(self):
        rng = np.random.default_rng(11)
        target = rng.random((3, 2))
        target /= target.sum(axis=0, keepdims=True)
        inst = MatrixInstance(np.eye(3), target, Orientation.COLUMN_STOCHASTIC)
        params = GpgParams(alpha0=1.0, lambda0=1e-3, tol=1e-9, it_max=2000)
        res = gpg_solve_matrix(inst, params, np.full((3, 2), 1.0 / math.sqrt(3.0)))
        assert np.allclose(res.x.sum(axis=0), 1.0, atol=1e-9)
        assert np.all(res.x >= -1e-12)
        assert check_oblique(res.y, Orientation.COLUMN_STOCHASTIC)
        assert_descent_invariants(res, params.gamma2,
                                  lipschitz=lipschitz_bound_matrix(inst))

    def test_row_stochastic_identity_target(self):
        inst = MatrixInstance(np.eye(4), orientation=Orientation.ROW_STOCHASTIC)
        params = GpgParams(alpha0=5.0, lambda0=1e-10, tol=1e-12, it_max=3000)
        res = gpg_solve_matrix(inst, params, np.full((4, 4), 0.5))
        assert objective_p(inst, res.x) <= 1e-8
        assert np.allclose(res.x.sum(axis=1), 1.0, atol=1e-9)
        assert check_oblique(res.y, Orientation.ROW_STOCHASTIC)

    def test_monotone_objective_row_case(self):
        rng = np.random.default_rng(12)
        d = rng.random((2, 5))
        d /= d.sum(axis=1, keepdims=True)
        inst = MatrixInstance(d, orientation=Orientation.ROW_STOCHASTIC)
        params = GpgParams(alpha0=1.0, lambda0=1e-3, tol=1e-9, it_max=500)
        res = gpg_solve_matrix(inst, params, np.full((5, 5), 1.0 / math.sqrt(5.0)))
        assert res.termination in (Termination.CONVERGED, Termination.MAX_ITER)
        assert_descent_invariants(res, params.gamma2,
                                  lipschitz=lipschitz_bound_matrix(inst))

    def test_rejects_infeasible_start(self):
        inst = MatrixInstance(np.eye(3), np.ones((3, 2)) / 3.0,
                              Orientation.COLUMN_STOCHASTIC)
        with pytest.raises(ValueError):
            gpg_solve_matrix(inst, GpgParams(), np.ones((3, 2)))
