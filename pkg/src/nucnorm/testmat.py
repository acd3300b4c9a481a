"""Test matrices with known or controlled spectra."""

import numpy as np

from .linalg import ContractError, householder_qr
from .rng import SeededRng, gaussian_matrix

S_FLOOR = 1e-6
S_STEEPNESS = 40.0


def _orthonormal_columns(rows, cols, rng):
    Q, _ = householder_qr(gaussian_matrix(rows, cols, rng))
    basis = np.zeros((rows, cols), order="F")
    basis[:cols, :cols] = np.eye(cols)
    return Q.apply_q(basis)


def prescribed_spectrum_matrix(spec, m, seed=0):
    """Return ``U diag(spec) V^T`` with random orthonormal ``U`` and ``V``.

    Parameters
    ----------
    spec : array_like, shape (n,)
        Non-increasing, nonnegative singular values.
    m : int
        Row count, ``m >= n``.
    seed : int
        ``U`` is drawn first (``m`` x ``n``), then ``V`` (``n`` x ``n``).
    """
    spec = np.asarray(spec, dtype=np.float64)
    n = spec.size
    if spec.ndim != 1 or n == 0:
        raise ContractError("spec must be a nonempty 1-D vector")
    if not np.all(np.isfinite(spec)) or np.any(spec < 0) or np.any(np.diff(spec) > 0):
        raise ContractError("spec must be finite, nonnegative and non-increasing")
    if m < n:
        raise ContractError(f"need m >= len(spec), got m={m}, len(spec)={n}")
    rng = SeededRng(seed)
    U = _orthonormal_columns(m, n, rng)
    V = _orthonormal_columns(n, n, rng)
    return np.asfortranarray((U * spec) @ V.T)


def s_shaped_spectrum(n):
    """Logistic profile: near 1, a steep drop around ``n/2``, then ``1e-6``.

    ``sigma_i = 1e-6 + (1 - 1e-6) / (1 + exp(40/n * (i - n/2)))`` for
    ``i = 1..n``.
    """
    if n < 3:
        raise ContractError(f"s_shaped_spectrum needs n >= 3, got {n}")
    i = np.arange(1, n + 1, dtype=np.float64)
    alpha = S_STEEPNESS / n
    return S_FLOOR + (1.0 - S_FLOOR) / (1.0 + np.exp(alpha * (i - n / 2.0)))


def bie_single_layer_matrix(n):
    """Nystrom matrix of the 2-D Laplace single-layer operator on the unit circle.

    Discretizes ``(S phi)(s) = -1/(2 pi) int log|x(s) - x(t)| phi(t) dt`` with
    ``n`` equispaced trapezoidal nodes. The log singularity on the diagonal is
    handled by integrating ``log|s - t|`` exactly over the node's own cell of
    width ``h``; the remaining smooth factor ``log(|x(s)-x(t)| / |s-t|)``
    tends to ``log|x'| = 0`` on the unit circle, so the diagonal is
    ``-h (log(h/2) - 1) / (2 pi)``.
    """
    if n < 16 or n % 2:
        raise ContractError(f"bie_single_layer_matrix needs even n >= 16, got {n}")
    h = 2.0 * np.pi / n
    k = np.arange(n)
    diff = (k[:, None] - k[None, :]) % n
    dist = np.ones((n, n))
    off = diff != 0
    dist[off] = 2.0 * np.abs(np.sin(np.pi * diff[off] / n))
    A = -h / (2.0 * np.pi) * np.log(dist)
    np.fill_diagonal(A, -h / (2.0 * np.pi) * (np.log(h / 2.0) - 1.0))
    return np.asfortranarray(A)
