"""Singular values by one-sided Jacobi rotations.

The input is first reduced by Householder QR to a square triangular factor
``R``; Jacobi then orthogonalizes the columns of ``R^T``, which has the same
singular values and typically needs fewer sweeps. Sweeps visit column pairs
in row-cyclic order. The inner loops are compiled with numba.
"""

import numpy as np
from numba import njit

from .linalg import as_matrix, householder_qr

MAX_SWEEPS = 60
ORTH_TOL = 1e-14


class ConvergenceError(ArithmeticError):
    """Raised when Jacobi sweeps hit the cap without converging."""


@njit(cache=True, fastmath={"reassoc", "contract"})
def _cyclic_sweeps(X, tol, max_sweeps):
    # Returns the number of sweeps used, or -1 if the cap was reached.
    m, n = X.shape
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                a = 0.0
                b = 0.0
                g = 0.0
                for i in range(m):
                    xp = X[i, p]
                    xq = X[i, q]
                    a += xp * xp
                    b += xq * xq
                    g += xp * xq
                if abs(g) <= tol * np.sqrt(a) * np.sqrt(b):
                    continue
                rotated = True
                zeta = (b - a) / (2.0 * g)
                if zeta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for i in range(m):
                    xp = X[i, p]
                    xq = X[i, q]
                    X[i, p] = c * xp - s * xq
                    X[i, q] = s * xp + c * xq
        if not rotated:
            return sweep + 1
    return -1


def svd_values(A, max_sweeps=MAX_SWEEPS):
    """All singular values of ``A`` in non-increasing order.

    Parameters
    ----------
    A : (m, n) array_like
        Finite real matrix.
    max_sweeps : int
        Sweep cap; exceeding it raises :class:`ConvergenceError`.

    Returns
    -------
    ndarray, shape (min(m, n),)

    Notes
    -----
    A column pair is rotated while ``|x_p . x_q| > tol ||x_p|| ||x_q||``
    with ``tol = max(1e-14, sqrt(n) eps)``. The relative test keeps small
    singular values accurate; the ``sqrt(n) eps`` floor is the round-off
    level of the inner products themselves.
    """
    A = as_matrix(A)
    if A.size == 0:
        return np.zeros(0)
    if A.shape[0] < A.shape[1]:
        A = A.T
    scale = np.max(np.abs(A))
    if scale == 0.0:
        return np.zeros(min(A.shape))
    _, R = householder_qr(A / scale)
    X = np.array(R.T, order="F")
    tol = max(ORTH_TOL, np.sqrt(X.shape[0]) * np.finfo(np.float64).eps)
    if _cyclic_sweeps(X, tol, max_sweeps) < 0:
        raise ConvergenceError(
            f"one-sided Jacobi did not converge in {max_sweeps} sweeps "
            f"(matrix of order {X.shape[1]})"
        )
    sv = scale * np.linalg.norm(X, axis=0)
    return np.sort(sv)[::-1].copy()
