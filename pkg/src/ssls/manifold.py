"""Matrix-valued extensions: stochastic-matrix least squares on oblique manifolds.

Two problems share one machinery:

* column-stochastic regression  min 0.5 ||A (Y.Y) - B||_F^2 + lam ||Y||_1 with
  every column of Y on the unit sphere (diag(Y'Y) = I), so that X = Y.Y has
  nonnegative entries and unit column sums;
* row-stochastic reconstruction from stationary vectors,
  min 0.5 ||D (Y.Y) - D||_F^2 + lam ||Y||_1 with unit-norm rows
  (diag(YY') = I), giving a transition matrix X = Y.Y with unit row sums.

A row-stochastic solve transposes the unknown and runs the column loop, since
Y has unit rows exactly when Y' has unit columns.  The prox step decomposes
into independent per-column sphere solves sharing one alpha and one lam.
"""

import time
from enum import Enum

import numpy as np

from .core import as_matrix, spectral_norm_sym
from .solver import GpgParams, SolveResult, _gpg_loop, _make_column_objective


class Orientation(Enum):
    COLUMN_STOCHASTIC = "column_stochastic"
    ROW_STOCHASTIC = "row_stochastic"


class MatrixInstance:
    """Data (A, B) of a stochastic-matrix least squares problem.

    For ROW_STOCHASTIC the data matrix is D (rows are the prescribed
    stationary vectors), b defaults to D itself and the unknown is square
    (n x n).  Gram products A'A and A'B are cached at construction.
    """

    def __init__(self, a, b=None, orientation=Orientation.COLUMN_STOCHASTIC):
        self.a = as_matrix(a, "a")
        self.orientation = orientation
        if orientation == Orientation.ROW_STOCHASTIC:
            if b is None:
                b = self.a
            self.b = as_matrix(b, "b")
            if self.b.shape != self.a.shape:
                raise ValueError("row-stochastic data requires b = D with D's shape")
        else:
            if b is None:
                raise ValueError("column-stochastic data requires a target matrix b")
            self.b = as_matrix(b, "b")
            if self.b.shape[0] != self.a.shape[0]:
                raise ValueError(
                    f"b has {self.b.shape[0]} rows, expected {self.a.shape[0]}"
                )
        self.ata = self.a.T @ self.a
        self.atb = self.a.T @ self.b

    @property
    def unknown_shape(self):
        """Shape of the unknown X (and of the sphere-factor iterate Y)."""
        n = self.a.shape[1]
        if self.orientation == Orientation.ROW_STOCHASTIC:
            return (n, n)
        return (n, self.b.shape[1])

    def __repr__(self):
        return (
            f"MatrixInstance(a={self.a.shape}, b={self.b.shape}, "
            f"orientation={self.orientation.value})"
        )


def check_oblique(y, orientation, tol: float = 1e-12) -> bool:
    """True iff every column (resp. row) of y has unit 2-norm within tol."""
    y = np.asarray(y, dtype=float)
    axis = 0 if orientation == Orientation.COLUMN_STOCHASTIC else 1
    sq = (y * y).sum(axis=axis)
    return bool(np.all(np.abs(sq - 1.0) <= tol))


def objective_p(inst: MatrixInstance, y) -> float:
    """Smooth objective 0.5 * ||A (Y.Y) - B||_F^2."""
    y = _check_iterate_shape(inst, y)
    r = inst.a @ (y * y) - inst.b
    return 0.5 * float((r * r).sum())


def gradient_p(inst: MatrixInstance, y):
    """Gradient 2 (A'A (Y.Y) - A'B) (.) Y (the same formula for both orientations)."""
    y = _check_iterate_shape(inst, y)
    return 2.0 * (inst.ata @ (y * y) - inst.atb) * y


def _check_iterate_shape(inst, y):
    y = np.asarray(y, dtype=float)
    if y.shape != inst.unknown_shape:
        raise ValueError(f"iterate has shape {y.shape}, expected {inst.unknown_shape}")
    return y


def lipschitz_bound_matrix(inst: MatrixInstance) -> float:
    """L = 6 n ||A'A||_2 + 2 ||A'B||_F over the per-column unit ball."""
    n = inst.a.shape[1]
    return 6.0 * n * spectral_norm_sym(inst.ata) + 2.0 * float(
        np.linalg.norm(inst.atb)
    )


def gpg_solve_matrix(inst: MatrixInstance, params: GpgParams, y0) -> SolveResult:
    """Run the adaptive sphere loop on a matrix iterate; returns X = Y (.) Y.

    The prox step decomposes into independent per-column (per-row) solves that
    share a single alpha and a single lam, and the sufficient-decrease test is
    applied to the full objective.
    """
    y0 = _check_iterate_shape(inst, y0)
    if not check_oblique(y0, inst.orientation, tol=1e-9):
        raise ValueError("y0 must have unit-norm columns/rows (within 1e-9)")

    start = time.perf_counter()
    lip = lipschitz_bound_matrix(inst)
    row_oriented = inst.orientation == Orientation.ROW_STOCHASTIC
    if row_oriented:
        base_fun, base_grad = _make_column_objective(
            inst.a, inst.b, inst.ata, inst.atb
        )
        fun = lambda z: base_fun(z.T)
        grad = lambda z: base_grad(z.T).T
        z0 = y0.T
    else:
        fun, grad = _make_column_objective(inst.a, inst.b, inst.ata, inst.atb)
        z0 = y0
    state = _gpg_loop(fun, grad, z0, params, lip)
    wall = time.perf_counter() - start

    y = state["y"].T if row_oriented else state["y"]
    iterates = state["iterates"]
    if iterates is not None and row_oriented:
        iterates = [xk.T for xk in iterates]
    return SolveResult(
        x=y * y,
        y=y,
        iterations=state["iterations"],
        f_history=state["f_history"],
        lambda_final=state["lambda_final"],
        termination=state["termination"],
        wall_time=wall,
        lambda_history=state["lambda_history"],
        alpha_history=state["alpha_history"],
        step_norm_history=state["step_norm_history"],
        q_norm_history=state["q_norm_history"],
        max_inner_passes=state["max_inner_passes"],
        message=state["message"],
        gamma1=state["gamma1"],
        iterates=iterates,
    )
