"""Convex comparison methods: projected gradient and ADMM on the simplex model.

Both solve the underlying convex problem min 0.5 ||A x - b||^2 over
K = {x : 1'x = 1, x >= 0} (the l1 term of the ADMM model is constant on K,
so it never influences the iterates).  They serve as accuracy and sparsity
references: being convex solvers they find the global optimum but typically
return dense solutions.
"""

import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .core import ProblemInstance, as_vector, spectral_norm_sym
from .solver import SolveResult, Termination

_MAX_BACKTRACKS = 60


def project_simplex(v):
    """Euclidean projection onto K = {x : 1'x = 1, x >= 0}.

    Sort-and-threshold: with u the descending sort of v, find the largest k
    with u_k - (sum_{i<=k} u_i - 1)/k > 0 and subtract that threshold, then
    clip at zero.
    """
    v = as_vector(v, "v")
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, v.shape[0] + 1)
    positive = u - (css - 1.0) / ks > 0
    k = int(np.nonzero(positive)[0][-1]) + 1  # k = 1 is always feasible
    theta = (css[k - 1] - 1.0) / k
    return np.maximum(v - theta, 0.0)


@dataclass
class PgParams:
    """Projected gradient controls.

    step_rule is "backtracking" (Armijo along the projection arc, factors
    beta and c) or "fixed".  step is the fixed step size, or the starting
    step of each backtracking search; None picks 1 / ||A'A||_2.
    """

    step_rule: str = "backtracking"
    step: float | None = None
    beta: float = 0.5
    c: float = 1e-4
    tol: float = 1e-6
    it_max: int = 5000

    def __post_init__(self):
        if self.step_rule not in ("backtracking", "fixed"):
            raise ValueError("step_rule must be 'backtracking' or 'fixed'")
        if self.step is not None and not self.step > 0:
            raise ValueError("step must be positive")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if not 0.0 < self.c < 1.0:
            raise ValueError("c must lie in (0, 1)")
        if not self.tol > 0 or self.it_max < 1:
            raise ValueError("tol must be positive and it_max at least 1")


def pg_solve(inst: ProblemInstance, params: PgParams, x0) -> SolveResult:
    """Projected gradient descent x <- P_K(x - t grad phi(x)) on K."""
    x = as_vector(x0, "x0")
    if x.shape != (inst.n,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({inst.n},)")
    if abs(float(x.sum()) - 1.0) > 1e-9 or float(x.min()) < -1e-12:
        raise ValueError("x0 must lie in the probability simplex")

    start = time.perf_counter()
    t0 = params.step if params.step is not None else 1.0 / spectral_norm_sym(inst.ata)

    def phi(x):
        r = inst.a @ x - inst.b
        return 0.5 * float(r @ r)

    f_hist = [phi(x)]
    termination = Termination.MAX_ITER
    iterations = 0
    for _ in range(params.it_max):
        g = inst.ata @ x - inst.atb
        if params.step_rule == "fixed":
            x_new = project_simplex(x - t0 * g)
        else:
            t = t0
            phi_x = f_hist[-1]
            for _bt in range(_MAX_BACKTRACKS):
                x_new = project_simplex(x - t * g)
                if phi(x_new) <= phi_x + params.c * float(g @ (x_new - x)):
                    break
                t *= params.beta
        iterations += 1
        f_hist.append(phi(x_new))
        rel_change = float(np.linalg.norm(x_new - x)) / float(np.linalg.norm(x))
        x = x_new
        if rel_change <= params.tol:
            termination = Termination.CONVERGED
            break

    return SolveResult(
        x=x,
        y=None,
        iterations=iterations,
        f_history=np.asarray(f_hist),
        lambda_final=0.0,
        termination=termination,
        wall_time=time.perf_counter() - start,
    )


@dataclass
class AdmmParams:
    """Two-block ADMM controls: l1 weight lam (reporting only on K),
    augmented-Lagrangian penalty mu, and absolute residual tolerance."""

    lam: float = 1e-2
    mu: float = 1.0
    tol: float = 1e-6
    it_max: int = 5000

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if not self.tol > 0 or self.it_max < 1:
            raise ValueError("tol must be positive and it_max at least 1")


def admm_solve(inst: ProblemInstance, params: AdmmParams, x0) -> SolveResult:
    """Two-block ADMM on min phi(x) + h(u) s.t. x = u, h = lam ||.||_1 + K-indicator.

    The x-update solves (A'A + mu I) x = A'b + mu (u - w), factored once; the
    u-update is the simplex projection of x + w (on K the l1 term is a
    constant, so lam never enters the update); w accumulates x - u.  Stops
    when the primal residual ||x - u|| and dual residual mu ||u - u_prev||
    both fall below tol.  The reported solution is u, which lies in K.
    """
    x = as_vector(x0, "x0")
    if x.shape != (inst.n,):
        raise ValueError(f"x0 has shape {x.shape}, expected ({inst.n},)")

    start = time.perf_counter()
    factor = cho_factor(inst.ata + params.mu * np.eye(inst.n))
    u = project_simplex(x)
    w = np.zeros(inst.n)

    def model_objective(u):
        r = inst.a @ u - inst.b
        return 0.5 * float(r @ r) + params.lam * float(np.abs(u).sum())

    f_hist = [model_objective(u)]
    termination = Termination.MAX_ITER
    iterations = 0
    primal = dual = float("inf")
    for _ in range(params.it_max):
        x = cho_solve(factor, inst.atb + params.mu * (u - w))
        u_new = project_simplex(x + w)
        w = w + x - u_new
        primal = float(np.linalg.norm(x - u_new))
        dual = params.mu * float(np.linalg.norm(u_new - u))
        u = u_new
        iterations += 1
        f_hist.append(model_objective(u))
        if primal <= params.tol and dual <= params.tol:
            termination = Termination.CONVERGED
            break

    return SolveResult(
        x=u,
        y=None,
        iterations=iterations,
        f_history=np.asarray(f_hist),
        lambda_final=params.lam,
        termination=termination,
        wall_time=time.perf_counter() - start,
        message=f"primal_residual={primal:.6e} dual_residual={dual:.6e}",
    )
