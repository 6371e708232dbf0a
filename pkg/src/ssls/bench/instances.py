"""Benchmark instance generators and embedded reference data.

Four instance families:

* synthetic lasso-style regression at sizes m = 20j, n = 300j;
* a hyperspectral-style 224 x 440 model with calibrated noise level;
* probabilistic Boolean network (PBN) decompositions of the two embedded
  8 x 8 transition matrices P1 and P2;
* reconstruction of a sparse row-stochastic matrix from an embedded
  stationary distribution vector.

All randomness flows through PortableRng so a seed pins the instance exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..core import ProblemInstance, as_matrix
from ..manifold import MatrixInstance, Orientation
from .rng import PortableRng

# Prescribed 8 x 8 transition matrices of the two three-gene PBN benchmarks.
# Embedded as published; column 3 of P2 sums to 0.96 in the source data, so
# its decomposition has a small but nonzero best-fit residual.
P1 = np.array([
    [0.1200, 0.0000, 0.6000, 0.4200, 0.0000, 0.0000, 0.0000, 0.0000],
    [0.2800, 0.0000, 0.0000, 0.1800, 0.0000, 0.0000, 0.0000, 0.0000],
    [0.0000, 0.4000, 0.0000, 0.0000, 0.4000, 0.1800, 0.0000, 0.0000],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.4200, 0.0000, 0.6000],
    [0.1800, 0.0000, 0.4000, 0.2800, 0.0000, 0.0000, 0.0000, 0.0000],
    [0.4200, 0.0000, 0.0000, 0.1200, 0.0000, 0.0000, 0.0000, 0.0000],
    [0.0000, 0.6000, 0.0000, 0.0000, 0.6000, 0.1200, 0.0000, 0.0000],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.2800, 1.0000, 0.4000],
])

P2 = np.array([
    [0.5672, 0.4328, 0.2881, 0.0000, 0.1447, 0.0000, 0.4328, 0.0000],
    [0.0000, 0.0000, 0.1447, 0.0000, 0.2881, 0.0000, 0.0000, 0.0000],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.3776],
    [0.0000, 0.0000, 0.0000, 0.4328, 0.0000, 0.0000, 0.0000, 0.1896],
    [0.4328, 0.5672, 0.3376, 0.0000, 0.1896, 0.0000, 0.5672, 0.0000],
    [0.0000, 0.0000, 0.1896, 0.0000, 0.3776, 0.0000, 0.0000, 0.0000],
    [0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.6657, 0.0000, 0.2881],
    [0.0000, 0.0000, 0.0000, 0.5672, 0.0000, 0.3343, 0.0000, 0.1447],
])

# Stationary distribution of the transition-matrix reconstruction benchmark.
D1 = np.array([0.1282, 0.2139, 0.0667, 0.1766, 0.1758, 0.0887, 0.1324, 0.0177])

P1.setflags(write=False)
P2.setflags(write=False)
D1.setflags(write=False)


def _sparse_simplex_vector(rng: PortableRng, n: int, density: float):
    """|x|/||x||_1 of a sparse standard-normal vector: a sparse simplex point."""
    k = max(1, round(density * n))
    support = rng.choose(n, k)
    x = np.zeros(n)
    x[support] = np.abs(rng.standard_normal(k))
    return x / x.sum()


def gen_lasso(j: int, seed: int):
    """Regression instance with m = 20j rows, n = 300j and a 5%-dense truth.

    b = A x* + nu * noise with standard-normal A and noise, and
    nu = 0.001 ||A x*|| / ||noise||.  Returns (instance, x_star).
    """
    if not 1 <= j <= 5:
        raise ValueError("j must lie in 1..5")
    rng = PortableRng(seed)
    m, n = 20 * j, 300 * j
    a = rng.standard_normal((m, n))
    x_star = _sparse_simplex_vector(rng, n, 0.05)
    noise = rng.standard_normal(m)
    ax = a @ x_star
    nu = 0.001 * float(np.linalg.norm(ax)) / float(np.linalg.norm(noise))
    return ProblemInstance(a, ax + nu * noise), x_star


def gen_hyperspectral(snr_db: float, seed: int):
    """224 x 440 Gaussian instance with a 2%-dense truth and calibrated noise.

    The noise is scaled from the realized norms so that
    10 log10(||A x*||^2 / ||noise||^2) equals snr_db exactly for this draw.
    Returns (instance, x_star).
    """
    rng = PortableRng(seed)
    m, n = 224, 440
    a = rng.standard_normal((m, n))
    x_star = _sparse_simplex_vector(rng, n, 0.02)
    noise = rng.standard_normal(m)
    ax = a @ x_star
    nu = float(np.linalg.norm(ax)) / (
        float(np.linalg.norm(noise)) * 10.0 ** (snr_db / 20.0)
    )
    return ProblemInstance(a, ax + nu * noise), x_star


@dataclass(frozen=True)
class PbnInstance:
    """A PBN decomposition: every constituent network picks one supported row
    per column, and the regression weights recover the mixture."""

    p: np.ndarray
    supports: tuple
    n_bn: int
    problem: ProblemInstance

    @property
    def a(self):
        return self.problem.a

    @property
    def b(self):
        return self.problem.b


def build_pbn(p, col_tol: float = 0.05, max_bn: int = 10**6) -> PbnInstance:
    """Enumerate the constituent Boolean networks of a transition matrix.

    Each column j of p contributes its support rows; a constituent network
    places a single 1 in one supported row per column, and its column in A is
    the column-major vectorization.  b is the vectorization of p itself, so
    minimizing 0.5 ||A x - b||^2 over the simplex recovers mixture weights.

    Columns must sum to 1 within col_tol (loose enough to accept published
    matrices with rounded entries) and the enumeration refuses to build more
    than max_bn networks.
    """
    p = as_matrix(p, "p")
    n = p.shape[0]
    if p.shape[1] != n:
        raise ValueError("p must be square")
    if np.any(p < 0):
        raise ValueError("p must be entrywise nonnegative")
    col_sums = p.sum(axis=0)
    if np.any(np.abs(col_sums - 1.0) > col_tol):
        worst = float(np.max(np.abs(col_sums - 1.0)))
        raise ValueError(f"p is not column-stochastic (worst column off by {worst:.4g})")

    supports = tuple(np.nonzero(p[:, j] > 0.0)[0] for j in range(n))
    sizes = [s.shape[0] for s in supports]
    n_bn = math.prod(sizes)
    if n_bn > max_bn:
        raise ValueError(f"{n_bn} constituent networks exceed the limit {max_bn}")

    # Mixed-radix enumeration, least-significant digit = column 0.
    a = np.zeros((n * n, n_bn))
    codes = np.arange(n_bn)
    for j in range(n):
        digits = codes % sizes[j]
        codes = codes // sizes[j]
        rows = supports[j][digits]
        a[j * n + rows, np.arange(n_bn)] = 1.0
    b = p.ravel(order="F")
    return PbnInstance(p=p, supports=supports, n_bn=n_bn, problem=ProblemInstance(a, b))


def stationary_instance() -> MatrixInstance:
    """Row-stochastic reconstruction data for the embedded distribution D1."""
    return MatrixInstance(D1[None, :], orientation=Orientation.ROW_STOCHASTIC)
