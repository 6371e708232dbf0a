"""Seeded sampling that reproduces bit-for-bit across platforms.

Gaussians come from the Box-Muller transform applied to uniform doubles drawn
from a PCG64 bit generator, and subset selection is a partial Fisher-Yates
shuffle driven by the same uniform stream.  Pinning the algorithms (rather
than relying on a library's normal/choice implementations, which may change
between releases) keeps seeded experiment instances stable.
"""

import numpy as np

_TWO_PI = 2.0 * np.pi


class PortableRng:
    """Deterministic sampling helpers on top of PCG64 uniform doubles."""

    def __init__(self, seed: int):
        self._gen = np.random.Generator(np.random.PCG64(seed))

    def uniform(self, size=None):
        """Uniform doubles in [0, 1)."""
        return self._gen.random(size)

    def standard_normal(self, size):
        """N(0, 1) samples via Box-Muller pairs."""
        shape = (size,) if np.isscalar(size) else tuple(size)
        count = int(np.prod(shape))
        half = (count + 1) // 2
        u1 = 1.0 - self._gen.random(half)  # (0, 1]: keeps log finite
        u2 = self._gen.random(half)
        radius = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([radius * np.cos(_TWO_PI * u2),
                            radius * np.sin(_TWO_PI * u2)])
        return z[:count].reshape(shape)

    def choose(self, n: int, k: int):
        """k distinct indices from range(n) by partial Fisher-Yates."""
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
        idx = np.arange(n)
        for i in range(k):
            j = i + int(self._gen.random() * (n - i))
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k]
