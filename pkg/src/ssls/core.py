"""Problem data and the smooth part of the sphere-reformulated objective.

The regression model is

    min  0.5 * ||A x - b||^2   over the probability simplex K = {x : 1'x = 1, x >= 0}.

Substituting x = y (.) y (componentwise square) maps the unit sphere onto K and
turns the l1 norm of y into a genuine sparsity penalty.  This module holds the
dense problem data with its cached Gram products and the smooth objective

    f(y)      = 0.5 * ||A (y.y) - b||^2
    grad f(y) = 2 (A'A (y.y) - A'b) (.) y

together with a Lipschitz constant for grad f on the closed unit ball, which
the step-size safeguards of the solvers rely on.
"""

import warnings
from dataclasses import dataclass

import numpy as np

# Slack allowed on ||y||^2 - 1 before the sphere indicator kicks in.  Iterates
# are renormalized by the solvers, so this only guards float drift.
FEASIBILITY_TOL = 1e-9


def as_vector(v, name="vector"):
    """Convert to a finite 1-D float array, raising ValueError otherwise."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def as_matrix(a, name="matrix"):
    """Convert to a finite 2-D float array with at least one row and column."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and column")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


def hadamard(u, v):
    """Componentwise product of two equal-length vectors."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    return u * v


class ProblemInstance:
    """Dense regression data A (m x n), b (m) with cached A'A and A'b.

    The Gram products are computed once at construction; every solver
    iteration needs them while A itself is only touched for objective and
    reporting purposes.  Instances are immutable and safe to share.
    """

    def __init__(self, a, b):
        self.a = as_matrix(a, "a")
        self.b = as_vector(b, "b")
        if self.b.shape[0] != self.a.shape[0]:
            raise ValueError(
                f"b has length {self.b.shape[0]}, expected {self.a.shape[0]} rows of a"
            )
        self.ata = self.a.T @ self.a
        self.atb = self.a.T @ self.b
        self.a.setflags(write=False)
        self.b.setflags(write=False)
        self.ata.setflags(write=False)
        self.atb.setflags(write=False)

    @property
    def m(self):
        return self.a.shape[0]

    @property
    def n(self):
        return self.a.shape[1]

    def __repr__(self):
        return f"ProblemInstance(m={self.m}, n={self.n})"


def objective_f(inst: ProblemInstance, y) -> float:
    """Smooth objective 0.5 * ||A (y.y) - b||^2."""
    y = np.asarray(y, dtype=float)
    if y.shape != (inst.n,):
        raise ValueError(f"y has shape {y.shape}, expected ({inst.n},)")
    r = inst.a @ (y * y) - inst.b
    return 0.5 * float(r @ r)


def gradient_f(inst: ProblemInstance, y):
    """Gradient 2 (A'A (y.y) - A'b) (.) y, using the cached Gram products."""
    y = np.asarray(y, dtype=float)
    if y.shape != (inst.n,):
        raise ValueError(f"y has shape {y.shape}, expected ({inst.n},)")
    return 2.0 * (inst.ata @ (y * y) - inst.atb) * y


def objective_F(inst: ProblemInstance, lam: float, y) -> float:
    """Composite objective f(y) + lam * ||y||_1 restricted to the unit sphere.

    Returns +inf when | ||y||^2 - 1 | exceeds FEASIBILITY_TOL.
    """
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    y = np.asarray(y, dtype=float)
    if abs(float(y @ y) - 1.0) > FEASIBILITY_TOL:
        return float("inf")
    return objective_f(inst, y) + lam * float(np.abs(y).sum())


def spectral_norm_sym(m, tol: float = 1e-10, max_iter: int = 10000) -> float:
    """Largest eigenvalue of a symmetric PSD matrix by power iteration.

    Deterministic start vector (normalized all-ones, falling back to e_1 if
    the all-ones vector lies in the null space).  Stops when successive
    Rayleigh-quotient estimates agree to relative accuracy `tol`.  If the
    iteration does not settle within `max_iter` steps the best estimate is
    returned and a RuntimeWarning is issued.
    """
    m = as_matrix(m, "m")
    if m.shape[0] != m.shape[1]:
        raise ValueError("m must be square")
    n = m.shape[0]
    v = np.full(n, 1.0 / np.sqrt(n))
    est = 0.0
    for attempt in range(2):
        for _ in range(max_iter):
            w = m @ v
            est_new = float(v @ w)
            nw = float(np.linalg.norm(w))
            if nw == 0.0:
                break
            v = w / nw
            if abs(est_new - est) <= tol * max(abs(est_new), np.finfo(float).tiny):
                return max(est_new, 0.0)
            est = est_new
        else:
            warnings.warn(
                f"power iteration did not converge in {max_iter} steps; "
                f"returning best estimate {est:.6e}",
                RuntimeWarning,
            )
            return max(est, 0.0)
        # all-ones start hit the null space; retry once from e_1
        v = np.zeros(n)
        v[0] = 1.0
        est = 0.0
    return 0.0


@dataclass(frozen=True)
class LipschitzBound:
    """Upper bound on the Lipschitz constant of grad f over the unit ball."""

    value: float


def lipschitz_bound(inst: ProblemInstance) -> LipschitzBound:
    """L = 6 ||A'A||_2 + 2 ||A'b||, valid for grad f on the closed unit ball."""
    sigma = spectral_norm_sym(inst.ata)
    return LipschitzBound(6.0 * sigma + 2.0 * float(np.linalg.norm(inst.atb)))
