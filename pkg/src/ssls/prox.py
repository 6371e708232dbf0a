"""Closed-form solution of the sphere-constrained, l1-regularized prox step.

Each solver iteration has to minimize the linearized model

    <y - d, g> + (1/(2*alpha)) * ||y - d||^2 + lam * ||y||_1    s.t.  ||y|| = 1

for the current iterate d on the sphere and g = grad f(d).  Completing the
square reduces this to minimizing sum_j w_j |y_j| over the sphere with

    z = d - alpha * g,    w_j = lam - |z_j| / alpha,

subject to the sign condition y (.) z >= 0 that any minimizer must satisfy.
A global minimizer is then explicit: if w >= 0, a single spike at the most
negative w_j (sign taken from z); otherwise the normalized negative part of w
with the signs of z.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

# ||w_-|| below this is numerically indistinguishable from the all-nonnegative
# case, so the spike branch is taken instead of dividing by it.
_WMINUS_UNDERFLOW = 1e-300


class Branch(Enum):
    SINGLE_SPIKE = "single_spike"
    SCALED = "scaled"


@dataclass(frozen=True)
class ProxInput:
    """One prox evaluation: unit-norm point d, gradient there, step and weight."""

    d: np.ndarray
    grad: np.ndarray
    alpha: float
    lam: float

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        grad = np.asarray(self.grad, dtype=float)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "grad", grad)
        if d.ndim != 1 or grad.shape != d.shape:
            raise ValueError("d and grad must be 1-D arrays of equal length")
        if not np.all(np.isfinite(d)) or not np.all(np.isfinite(grad)):
            raise ValueError("d and grad must be finite")
        if abs(float(d @ d) - 1.0) > 1e-9:
            raise ValueError("d must have unit norm (within 1e-9 on ||d||^2)")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")


@dataclass(frozen=True)
class ProxSolution:
    """Global minimizer plus the intermediates that determine the branch."""

    y: np.ndarray
    branch: Branch
    z: np.ndarray
    w: np.ndarray
    v: np.ndarray
    spike_index: int | None = None
    degenerate: bool = False


def prox_sphere_l1(inp: ProxInput) -> ProxSolution:
    """Solve the linearized sphere/l1 subproblem in closed form."""
    z = inp.d - inp.alpha * inp.grad
    v = np.where(z >= 0, 1.0, -1.0)
    w = inp.lam - np.abs(z) / inp.alpha

    # lam = 0 and z = 0 leaves every unit vector optimal; pick e_1 but flag it.
    degenerate = inp.lam == 0.0 and not np.any(z)

    w_minus = np.minimum(w, 0.0)
    norm_w_minus = float(np.linalg.norm(w_minus))
    if norm_w_minus < _WMINUS_UNDERFLOW:
        t = int(np.argmin(w))
        y = np.zeros_like(z)
        y[t] = v[t]
        return ProxSolution(
            y=y, branch=Branch.SINGLE_SPIKE, z=z, w=w, v=v,
            spike_index=t, degenerate=degenerate,
        )
    y = -(w_minus / norm_w_minus) * v
    return ProxSolution(y=y, branch=Branch.SCALED, z=z, w=w, v=v)


def check_sign_compatibility(y, z, tol: float = 1e-12) -> bool:
    """True iff y_j * z_j >= -tol for every j (necessary optimality condition)."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if y.shape != z.shape:
        raise ValueError("y and z must have equal length")
    return bool(np.all(y * z >= -tol))
