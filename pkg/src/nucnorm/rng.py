"""Seeded Gaussian sampling.

Uniform 64-bit words come from numpy's counter-based Philox bit generator,
whose raw stream is fixed across numpy releases. Normals are produced from
those words with the Box-Muller transform, so the Gaussian stream does not
depend on numpy's sampler internals either.
"""

import numpy as np

_TWO_POW_M53 = 2.0 ** -53


class SeededRng:
    """Deterministic single-owner source of standard normal draws.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit seed.
    """

    def __init__(self, seed=0):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._bitgen = np.random.Philox(seed)

    def standard_normal(self, count):
        """Return ``count`` i.i.d. N(0, 1) draws as a float64 vector."""
        count = int(count)
        npairs = (count + 1) // 2
        raw = self._bitgen.random_raw(2 * npairs).reshape(npairs, 2)
        # u1 in (0, 1] keeps the log finite; u2 in [0, 1)
        u1 = ((raw[:, 0] >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO_POW_M53
        u2 = (raw[:, 1] >> np.uint64(11)).astype(np.float64) * _TWO_POW_M53
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * npairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]

    def __repr__(self):
        return f"SeededRng(seed={self.seed})"


def gaussian_matrix(rows, cols, rng):
    """Draw a ``rows`` x ``cols`` matrix of i.i.d. standard normals.

    Entries are consumed from ``rng`` in column-major order.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"gaussian_matrix needs rows, cols >= 1, got {rows}x{cols}")
    return rng.standard_normal(rows * cols).reshape((rows, cols), order="F")
