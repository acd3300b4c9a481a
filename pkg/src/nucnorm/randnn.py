"""Randomized blocked estimation of all singular values (randNN).

Each panel of ``b`` columns is rotated from the right by an orthogonal
``V`` whose leading columns approximate the dominant right singular
subspace of the trailing block, then from the left by the ``U`` of a QR
factorization of the rotated panel. The panel's ``b`` x ``b`` diagonal block
``R`` is then (nearly) decoupled and its singular values are taken as
estimates. ``U`` and ``V`` are applied as Householder products and never
accumulated.

The Frobenius norm of everything above the block diagonal of the final
triangular matrix bounds the l2 distance between the sorted estimates and
the true singular values (Mirsky's inequality). It is accumulated one block
row at a time; right rotations applied later leave each block row's norm
unchanged, so the value is final as soon as the row is produced.
"""

import math
from dataclasses import dataclass

import numpy as np

from .jacobi import svd_values
from .linalg import ContractError, as_matrix, householder_qr, matmul
from .rng import SeededRng, gaussian_matrix

BOUND_SLACK = 1e-10


@dataclass(frozen=True)
class RandNNConfig:
    """Parameters of :func:`rand_nn`.

    Defaults follow the reported experiments: ``b = 64``, ``q = 2``.
    """

    block_size: int = 64
    power_iters: int = 2
    early_stop_threshold: float = 0.0
    seed: int = 0
    compute_bound: bool = True

    def __post_init__(self):
        if self.block_size < 1:
            raise ContractError(f"block_size must be >= 1, got {self.block_size}")
        if self.power_iters < 0:
            raise ContractError(f"power_iters must be >= 0, got {self.power_iters}")
        if not self.early_stop_threshold >= 0.0:
            raise ContractError(
                f"early_stop_threshold must be >= 0, got {self.early_stop_threshold}"
            )
        if not 0 <= self.seed < 2**64:
            raise ContractError(f"seed must be an unsigned 64-bit integer, got {self.seed}")


@dataclass
class SpectrumEstimate:
    """Output of :func:`rand_nn`.

    Attributes
    ----------
    values : ndarray
        ``min(m, n)`` estimated singular values in block order. Each
        ``b``-segment is non-increasing; the whole vector need not be.
        After early termination the unprocessed tail is zero.
    bound_fro : float or None
        Frobenius norm of the off-block-diagonal part of ``T``. ``None`` if
        the bound was not requested or the run stopped early.
    blocks_processed : int
    terminated_early : bool
    """

    values: np.ndarray
    bound_fro: float | None
    blocks_processed: int
    terminated_early: bool = False


def power_sample(A, b, q, rng):
    """Sketch ``Y = (A^T A)^q A^T G`` with ``G`` an ``m`` x ``b`` Gaussian.

    No re-orthonormalization is done between the power rounds.
    """
    A = as_matrix(A)
    if A.shape[1] < 1 or b < 1:
        raise ContractError(f"power_sample needs >= 1 column and b >= 1, got {A.shape}, b={b}")
    G = gaussian_matrix(A.shape[0], b, rng)
    Y = matmul(A, G, transpose_a=True)
    for _ in range(q):
        Y = matmul(A, matmul(A, Y), transpose_a=True)
    return Y


def step_nn(A, b, q, rng):
    """Reduce the leading ``b`` columns of a working block.

    Parameters
    ----------
    A : (m, n) array_like
        Trailing block, ``n > b`` and ``m >= b``.
    b, q : int
        Block size and number of power iterations.
    rng : SeededRng

    Returns
    -------
    T : ndarray, shape (m, n)
        ``U^T A V``; its first ``b`` columns are ``[R; 0]`` exactly.
    ss : ndarray, shape (b,)
        Singular values of ``R``, non-increasing.
    """
    A = as_matrix(A)
    m, n = A.shape
    if n <= b:
        raise ContractError(f"step_nn needs more than b={b} columns, got {n}")
    if m < b:
        raise ContractError(f"step_nn needs at least b={b} rows, got {m}")
    Y = power_sample(A, b, q, rng)
    V, _ = householder_qr(Y)
    T = V.apply_right(A)
    U, R = householder_qr(T[:, :b])
    T[:, :b] = 0.0
    T[:b, :b] = R
    T[:, b:] = U.apply_qt(T[:, b:])
    return T, svd_values(R)


def rand_nn(A, config=None, on_step=None):
    """Estimate every singular value of ``A``.

    Parameters
    ----------
    A : (m, n) array_like
        Finite real matrix. Wide inputs are processed as ``A^T``.
    config : RandNNConfig, optional
    on_step : callable, optional
        Called as ``on_step(panel, before, after)`` with the working block
        before and after each :func:`step_nn`. Intended for instrumentation.

    Returns
    -------
    SpectrumEstimate
    """
    cfg = config if config is not None else RandNNConfig()
    A = as_matrix(A)
    if A.size == 0:
        raise ContractError(f"rand_nn needs a nonempty matrix, got shape {A.shape}")
    if A.shape[0] < A.shape[1]:
        A = A.T
    m, n = A.shape
    b, q = cfg.block_size, cfg.power_iters
    rng = SeededRng(cfg.seed)

    T = np.array(A, order="F", copy=True)
    values = np.zeros(n)
    off_sq = 0.0
    blocks = 0
    stopped = False
    for panel in range(math.ceil(n / b)):
        i0 = panel * b
        i1 = min(i0 + b, n)
        if i1 < n:
            work = T[i0:, i0:]
            updated, ss = step_nn(work, b, q, rng)
            if on_step is not None:
                on_step(panel, work.copy(order="F"), updated)
            work[...] = updated
            values[i0:i1] = ss
            if cfg.compute_bound:
                row = T[i0:i1, i1:]
                off_sq += float(np.einsum("ij,ij->", row, row))
            blocks += 1
            if cfg.early_stop_threshold > 0.0 and ss[0] < cfg.early_stop_threshold:
                stopped = True
                break
        else:
            # last panel: rows below n belong to the final diagonal block
            values[i0:] = svd_values(T[i0:, i0:])
            blocks += 1

    bound = math.sqrt(off_sq) if cfg.compute_bound and not stopped else None
    return SpectrumEstimate(values, bound, blocks, stopped)


def _values(est):
    return np.asarray(getattr(est, "values", est), dtype=np.float64)


def nuclear_norm(est):
    """Sum of the estimated singular values."""
    return float(np.sum(_values(est)))


def schatten_p(est, p):
    """Schatten-``p`` norm ``(sum s_i^p)^(1/p)`` of an estimate, ``p >= 1``."""
    if not p >= 1:
        raise ContractError(f"Schatten norms need p >= 1, got {p}")
    if p == 1:
        return nuclear_norm(est)
    s = _values(est)
    top = float(np.max(s)) if s.size else 0.0
    if top == 0.0:
        return 0.0
    if math.isinf(p):
        return top
    return top * float(np.sum((s / top) ** p)) ** (1.0 / p)


def error_bound_check(true_values, est):
    """Compare sorted estimates with true singular values.

    Returns
    -------
    lhs : float
        ``sqrt(sum (sigma_i - sigma_hat_i)^2)`` with both sides sorted.
    holds : bool
        Whether ``lhs <= bound_fro + 1e-10 (1 + bound_fro)``.
    """
    true_values = np.sort(np.asarray(true_values, dtype=np.float64))[::-1]
    estimated = np.sort(_values(est))[::-1]
    if true_values.shape != estimated.shape:
        raise ContractError(
            f"length mismatch: {true_values.size} true values, {estimated.size} estimates"
        )
    if est.bound_fro is None:
        raise ContractError("estimate carries no comparable error bound")
    lhs = float(np.linalg.norm(true_values - estimated))
    bound = est.bound_fro
    return lhs, lhs <= bound + BOUND_SLACK * (1.0 + bound)
