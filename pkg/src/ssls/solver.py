"""Outer proximal-gradient loop on the unit sphere with adaptive step and weight.

One iteration linearizes the smooth part at the current sphere point, solves
the l1/sphere prox step in closed form, and backtracks the step size alpha
until the sufficient-decrease test

    F(lam, y_bar) <= F(lam, y) - (gamma2 / 2) * ||y_bar - y||^2

holds, where F(lam, y) = f(y) + lam * ||y||_1 on the sphere.  While
backtracking, the regularization weight lam decays by rho3 whenever the
relative change of F stalls below delta2, which trades sparsity against the
final residual.  The same loop drives the matrix solvers: there the iterate
is a matrix whose columns live on the sphere and the prox step decomposes
into independent per-column solves sharing one alpha and one lam.

The engine works on (n, r) arrays; the vector entry point wraps r = 1.
"""

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import ProblemInstance, lipschitz_bound
from .prox import ProxInput, prox_sphere_l1


class Termination(Enum):
    CONVERGED = "converged"
    MAX_ITER = "max_iter"
    DEGENERATE = "degenerate"


@dataclass
class GpgParams:
    """Tunables of the adaptive loop.

    gamma1 is the floor of the backtracking; left as None it is resolved at
    solve time to 0.9 / (L + gamma2) from the instance's Lipschitz bound,
    which guarantees the inner loop exits.  tol and it_max are experiment
    level settings, not library constants.
    """

    alpha0: float = 1.0
    lambda0: float = 1e-2
    rho1: float = 0.9
    rho2: float = 0.6
    rho3: float = 0.9
    gamma1: float | None = None
    gamma2: float = 1e-5
    delta1: float = 4.0
    delta2: float = 1e-4
    tol: float = 1e-5
    it_max: int = 3000
    inner_max: int = 1000
    fixed_lambda: bool = False
    keep_iterates: bool = False

    def __post_init__(self):
        if not self.alpha0 > 0:
            raise ValueError("alpha0 must be positive")
        if self.lambda0 < 0:
            raise ValueError("lambda0 must be nonnegative")
        for name in ("rho1", "rho2", "rho3"):
            r = getattr(self, name)
            if not 0.0 < r < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.gamma1 is not None and not 0.0 < self.gamma1 <= self.alpha0:
            raise ValueError("gamma1 must lie in (0, alpha0]")
        if not self.gamma2 > 0:
            raise ValueError("gamma2 must be positive")
        if not self.delta1 > 0 or not self.delta2 > 0:
            raise ValueError("delta1 and delta2 must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.it_max < 1 or self.inner_max < 1:
            raise ValueError("it_max and inner_max must be at least 1")


@dataclass
class SolveResult:
    """Final iterate plus the per-iteration scalar trace.

    x is the simplex/stochastic point (y (.) y for the sphere methods), y the
    underlying sphere iterate (None for solvers that work on x directly).
    f_history holds the composite objective at y0 and after every accepted
    step; for the descent methods it is non-increasing.  The remaining
    histories have one entry per accepted step.
    """

    x: np.ndarray
    y: np.ndarray | None
    iterations: int
    f_history: np.ndarray
    lambda_final: float
    termination: Termination
    wall_time: float
    lambda_history: np.ndarray = field(default_factory=lambda: np.empty(0))
    alpha_history: np.ndarray = field(default_factory=lambda: np.empty(0))
    step_norm_history: np.ndarray = field(default_factory=lambda: np.empty(0))
    q_norm_history: np.ndarray = field(default_factory=lambda: np.empty(0))
    max_inner_passes: int = 0
    message: str = ""
    gamma1: float = float("nan")
    iterates: list | None = None


def _resolve_gamma1(params: GpgParams, lipschitz: float) -> float:
    if params.gamma1 is not None:
        return params.gamma1
    return min(0.9 / (lipschitz + params.gamma2), params.alpha0)


def _make_column_objective(a, b, ata, atb):
    """Smooth objective and gradient closures over an (n, r) iterate.

    a: (m, n), b: (m, r), ata: (n, n), atb: (n, r).  The vector solver passes
    r = 1 so both entry points share the exact same arithmetic.
    """

    def fun(y):
        r = a @ (y * y) - b
        return 0.5 * float((r * r).sum())

    def grad(y):
        return 2.0 * (ata @ (y * y) - atb) * y

    return fun, grad


def _column_prox(y, g, alpha, lam):
    """Independent closed-form prox on every column; shared alpha and lam."""
    out = np.empty_like(y)
    degenerate = False
    for j in range(y.shape[1]):
        sol = prox_sphere_l1(ProxInput(d=y[:, j], grad=g[:, j], alpha=alpha, lam=lam))
        out[:, j] = sol.y
        degenerate = degenerate or sol.degenerate
    return out, degenerate


def _renormalize_columns(y):
    return y / np.linalg.norm(y, axis=0, keepdims=True)


def _gpg_loop(fun, grad, y0, params: GpgParams, lipschitz: float):
    """Run the adaptive loop on an (n, r) iterate with unit-norm columns."""
    gamma1 = _resolve_gamma1(params, lipschitz)
    y = _renormalize_columns(np.array(y0, dtype=float))
    lam = params.lambda0

    f_y = fun(y)
    l1_y = float(np.abs(y).sum())
    f_hist = [f_y + lam * l1_y]
    lam_hist, alpha_hist, step_hist, q_hist = [], [], [], []
    iterates = [y * y] if params.keep_iterates else None

    g = grad(y)
    x_old = y * y
    termination = Termination.MAX_ITER
    message = ""
    max_inner = 0
    accepted_steps = 0

    for _ in range(params.it_max):
        F_cur = f_y + lam * l1_y
        if F_cur == 0.0:
            # exact fit with lam = 0: the relative tests are undefined, stop
            termination = Termination.CONVERGED
            message = "exact fit reached (F = 0)"
            break

        # Pascal-style repeat/until: the adjustment body always runs at least
        # once per outer step and the sufficient-decrease test is applied to
        # the candidate the body just produced.  The weight decay therefore
        # fires exactly when the previous candidate's relative F-change
        # stalled below delta2, whether or not that candidate was acceptable.
        alpha = params.alpha0
        ybar, degen = _column_prox(y, g, alpha, lam)
        f_bar = fun(ybar)
        l1_bar = float(np.abs(ybar).sum())
        inner = 0
        accepted = False
        step_sq = 0.0
        while inner < params.inner_max:
            inner += 1
            F_bar = f_bar + lam * l1_bar
            F_cur = f_y + lam * l1_y
            alpha = max(gamma1, alpha * params.rho1)
            if F_bar > params.delta1 * F_cur:
                alpha = max(gamma1, alpha * params.rho2)
            if abs(F_bar - F_cur) < params.delta2 * F_cur and not params.fixed_lambda:
                lam = lam * params.rho3
            ybar, d = _column_prox(y, g, alpha, lam)
            degen = degen or d
            f_bar = fun(ybar)
            l1_bar = float(np.abs(ybar).sum())
            F_bar = f_bar + lam * l1_bar
            F_cur = f_y + lam * l1_y
            diff = ybar - y
            step_sq = float((diff * diff).sum())
            if F_bar <= F_cur - 0.5 * params.gamma2 * step_sq:
                accepted = True
                break
        max_inner = max(max_inner, inner)

        if degen:
            termination = Termination.DEGENERATE
            message = "degenerate prox subproblem (z = 0 with lam = 0)"
            break
        if not accepted:
            termination = Termination.DEGENERATE
            message = (
                f"sufficient decrease not reached within inner_max="
                f"{params.inner_max} passes (alpha={alpha:.3e}, F={F_cur:.6e})"
            )
            break

        y_new = _renormalize_columns(ybar)
        g_new = grad(y_new)
        q = g_new - g - (y_new - y) / alpha
        step = float(np.linalg.norm(y_new - y))
        x_new = y_new * y_new

        rel_change = float(np.linalg.norm(x_new - x_old)) / float(np.linalg.norm(x_old))

        y, g, x_old = y_new, g_new, x_new
        f_y = fun(y)
        l1_y = float(np.abs(y).sum())
        accepted_steps += 1
        f_hist.append(f_y + lam * l1_y)
        lam_hist.append(lam)
        alpha_hist.append(alpha)
        step_hist.append(step)
        q_hist.append(float(np.linalg.norm(q)))
        if iterates is not None:
            iterates.append(x_new)

        if rel_change <= params.tol:
            termination = Termination.CONVERGED
            break

    return {
        "y": y,
        "gamma1": gamma1,
        "iterations": accepted_steps,
        "f_history": np.asarray(f_hist),
        "lambda_history": np.asarray(lam_hist),
        "alpha_history": np.asarray(alpha_hist),
        "step_norm_history": np.asarray(step_hist),
        "q_norm_history": np.asarray(q_hist),
        "lambda_final": lam,
        "termination": termination,
        "message": message,
        "max_inner_passes": max_inner,
        "iterates": iterates,
    }


def gpg_solve(inst: ProblemInstance, params: GpgParams, y0) -> SolveResult:
    """Solve min f(y) + lam ||y||_1 over the unit sphere; returns x = y (.) y."""
    y0 = np.asarray(y0, dtype=float)
    if y0.shape != (inst.n,):
        raise ValueError(f"y0 has shape {y0.shape}, expected ({inst.n},)")
    if abs(float(y0 @ y0) - 1.0) > 1e-9:
        raise ValueError("y0 must have unit norm (within 1e-9 on ||y0||^2)")

    start = time.perf_counter()
    lip = lipschitz_bound(inst).value
    fun, grad = _make_column_objective(
        inst.a, inst.b[:, None], inst.ata, inst.atb[:, None]
    )
    state = _gpg_loop(fun, grad, y0[:, None], params, lip)
    wall = time.perf_counter() - start

    y = state["y"][:, 0]
    if state["iterates"] is not None:
        state["iterates"] = [xk[:, 0] for xk in state["iterates"]]
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
        iterates=state["iterates"],
    )


def nnz(x, eps: float = 1e-6) -> int:
    """Count of entries with magnitude above eps."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return int(np.count_nonzero(np.abs(np.asarray(x, dtype=float)) > eps))


def kkt_residual(inst: ProblemInstance, x) -> float:
    """Natural-map optimality residual || x - P_K(x - grad phi(x)) ||.

    phi(x) = 0.5 ||A x - b||^2 and P_K is the Euclidean projection onto the
    probability simplex.  Zero exactly at the KKT points of the simplex
    constrained least squares problem.
    """
    from .baselines import project_simplex  # deferred: avoids an import cycle

    x = np.asarray(x, dtype=float)
    if x.shape != (inst.n,):
        raise ValueError(f"x has shape {x.shape}, expected ({inst.n},)")
    if abs(float(x.sum()) - 1.0) > 1e-6 or float(x.min()) < -1e-6:
        raise ValueError("x must lie in the probability simplex (within 1e-6)")
    g = inst.ata @ x - inst.atb
    return float(np.linalg.norm(x - project_simplex(x - g)))
