"""Independent oracles shared by the test modules.

Everything here is deliberately implemented by a different route than the
library code it checks: characteristic-polynomial bisection instead of power
iteration, dense grids instead of closed forms, finite differences instead of
analytic gradients.
"""

import numpy as np


def charpoly_top_eigenvalue(m, scan_steps=20000, bisect_steps=200):
    """Largest eigenvalue of a symmetric matrix by sign-bisection of det(M - tI).

    Scans down from the Gershgorin upper bound for the first sign change of
    the characteristic polynomial, then bisects.  Assumes the top eigenvalue
    is simple (almost surely true for the random matrices tested).
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    eye = np.eye(n)
    upper = float(np.abs(m).sum(axis=1).max()) * (1.0 + 1e-9) + 1e-12

    def det_sign(t):
        sign, _ = np.linalg.slogdet(m - t * eye)
        return sign

    top_sign = (-1.0) ** n
    ts = np.linspace(upper, 0.0, scan_steps)
    lo = hi = None
    prev = ts[0]
    for t in ts[1:]:
        s = det_sign(t)
        if s != 0 and s != top_sign:
            lo, hi = t, prev
            break
        prev = t
    if lo is None:
        return 0.0
    for _ in range(bisect_steps):
        mid = 0.5 * (lo + hi)
        if det_sign(mid) == top_sign:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def fd_gradient(fun, y, h=1e-6):
    """Central finite differences of a scalar function of a vector."""
    y = np.asarray(y, dtype=float)
    g = np.zeros_like(y)
    for i in range(y.size):
        step = np.zeros_like(y)
        step[i] = h
        g[i] = (fun(y + step) - fun(y - step)) / (2.0 * h)
    return g


def fd_gradient_matrix(fun, y, h=1e-6):
    """Entrywise central finite differences for a scalar function of a matrix."""
    y = np.asarray(y, dtype=float)
    g = np.zeros_like(y)
    for idx in np.ndindex(*y.shape):
        step = np.zeros_like(y)
        step[idx] = h
        g[idx] = (fun(y + step) - fun(y - step)) / (2.0 * h)
    return g


def circle_grid(count=1_000_000):
    """Unit-circle points as a (2, count) array."""
    theta = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
    return np.vstack([np.cos(theta), np.sin(theta)])


def fibonacci_sphere(count=1_000_000):
    """Nearly uniform unit-sphere points in R^3 as a (3, count) array."""
    i = np.arange(count)
    golden = np.pi * (3.0 - np.sqrt(5.0))
    z = 1.0 - 2.0 * (i + 0.5) / count
    radius = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = golden * i
    return np.vstack([radius * np.cos(phi), radius * np.sin(phi), z])


def prox_objective(d, grad, alpha, lam, points):
    """Linearized subproblem objective at each column of `points`."""
    d = np.asarray(d, dtype=float)[:, None]
    grad = np.asarray(grad, dtype=float)[:, None]
    diff = points - d
    return ((diff * grad).sum(axis=0)
            + 0.5 / alpha * (diff * diff).sum(axis=0)
            + lam * np.abs(points).sum(axis=0))


def simplex_grid(n, k):
    """All points of the k-resolution lattice on the n-simplex, shape (n, N)."""
    if n == 2:
        i = np.arange(k + 1)
        return np.vstack([i, k - i]) / k
    if n == 3:
        cols = []
        for i in range(k + 1):
            j = np.arange(k - i + 1)
            cols.append(np.vstack([np.full(j.shape, i), j, k - i - j]))
        return np.concatenate(cols, axis=1) / k
    if n == 4:
        cols = []
        for i in range(k + 1):
            for j in range(k - i + 1):
                l = np.arange(k - i - j + 1)
                cols.append(np.vstack([np.full(l.shape, i), np.full(l.shape, j),
                                       l, k - i - j - l]))
        return np.concatenate(cols, axis=1) / k
    raise ValueError("simplex_grid supports n in {2, 3, 4}")


def sample_unit_ball(rng, n, count):
    """Uniform points in the unit ball of R^n, shape (n, count)."""
    g = rng.normal(size=(n, count))
    g /= np.linalg.norm(g, axis=0, keepdims=True)
    radius = rng.random(count) ** (1.0 / n)
    return g * radius


def random_prox_input(rng, n):
    """A random well conditioned prox input (d, grad, alpha, lam)."""
    d = rng.normal(size=n)
    d /= np.linalg.norm(d)
    grad = rng.normal(size=n) * 10.0 ** rng.uniform(-2.0, 2.0)
    alpha = 10.0 ** rng.uniform(-3.0, 1.0)
    lam = 10.0 ** rng.uniform(-4.0, 0.0)
    return d, grad, alpha, lam
