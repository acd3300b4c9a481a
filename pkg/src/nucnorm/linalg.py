"""Dense kernels: products, Frobenius norm and Householder QR.

Matrices are plain float64 ndarrays kept in column-major (Fortran) order.
Orthogonal factors from :func:`householder_qr` are returned as a
:class:`ReflectorSet` and applied blockwise in compact WY form; they are
never materialized unless :meth:`ReflectorSet.to_dense` is called.
"""

from dataclasses import dataclass, field

import numpy as np

DEFAULT_BLOCK = 32


class ContractError(ValueError):
    """Raised when an input violates an operation's preconditions."""


def as_matrix(A, name="A", check_finite=True):
    """Return ``A`` as a 2-D float64 column-major array.

    A copy is made only when the dtype or memory layout requires one.
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ContractError(f"{name} must be 2-D, got shape {A.shape}")
    if check_finite and not np.all(np.isfinite(A)):
        raise ContractError(f"{name} contains NaN or Inf")
    return np.asfortranarray(A)


def matmul(A, B, transpose_a=False, transpose_b=False):
    """Return ``op(A) @ op(B)`` where ``op`` optionally transposes.

    Raises
    ------
    ContractError
        If the inner dimensions do not agree after transposition.
    """
    A = as_matrix(A, "A", check_finite=False)
    B = as_matrix(B, "B", check_finite=False)
    opA = A.T if transpose_a else A
    opB = B.T if transpose_b else B
    if opA.shape[1] != opB.shape[0]:
        raise ContractError(
            f"cannot multiply {'A^T' if transpose_a else 'A'} of shape {opA.shape} "
            f"by {'B^T' if transpose_b else 'B'} of shape {opB.shape}"
        )
    return np.asfortranarray(opA @ opB)


def frobenius_norm(A):
    """Square root of the sum of squared entries of ``A``."""
    A = np.asarray(A, dtype=np.float64)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A.ravel(order="K")))


def _house(x):
    """Householder vector for ``x`` with a nonnegative image.

    Returns ``(v, tau, beta)`` with ``v[0] == 1`` such that
    ``(I - tau v v^T) x = beta e_1`` and ``beta >= 0``.
    """
    v = np.zeros_like(x)
    v[0] = 1.0
    alpha = x[0]
    scale = np.max(np.abs(x))
    if scale == 0.0:
        return v, 0.0, 0.0
    xs = x / scale
    sigma = float(xs[1:] @ xs[1:])
    a = xs[0]
    if sigma == 0.0:
        if alpha >= 0.0:
            return v, 0.0, float(alpha)
        # pure sign flip
        return v, 2.0, float(-alpha)
    mu = np.sqrt(a * a + sigma)
    if a <= 0.0:
        v1 = a - mu
    else:
        v1 = -sigma / (a + mu)
    tau = 2.0 * v1 * v1 / (sigma + v1 * v1)
    v[1:] = xs[1:] / v1
    return v, float(tau), float(mu * scale)


def _larft(V, tau):
    """Upper triangular ``T`` with ``H_1 ... H_k = I - V T V^T``."""
    k = V.shape[1]
    T = np.zeros((k, k), order="F")
    gram = V.T @ V
    for i in range(k):
        T[i, i] = tau[i]
        if i > 0 and tau[i] != 0.0:
            T[:i, i] = -tau[i] * (T[:i, :i] @ gram[:i, i])
    return T


@dataclass
class ReflectorSet:
    """Orthogonal matrix ``Q = H_1 H_2 ... H_k`` held as Householder vectors.

    ``vectors[:, j]`` is zero above row ``j`` and has a unit entry at row
    ``j``; ``H_j = I - tau[j] v_j v_j^T``. ``Q`` is square of order
    ``base_dim``.
    """

    vectors: np.ndarray
    tau: np.ndarray
    block_size: int = DEFAULT_BLOCK
    _wy: list = field(default=None, init=False, repr=False, compare=False)

    @property
    def base_dim(self):
        return self.vectors.shape[0]

    def __len__(self):
        return self.vectors.shape[1]

    def _blocks(self):
        if self._wy is None:
            wy = []
            for j0 in range(0, len(self), self.block_size):
                j1 = min(j0 + self.block_size, len(self))
                if not np.any(self.tau[j0:j1]):
                    continue
                Vb = np.asfortranarray(self.vectors[j0:, j0:j1])
                wy.append((j0, Vb, _larft(Vb, self.tau[j0:j1])))
            self._wy = wy
        return self._wy

    def _check(self, n, what):
        if n != self.base_dim:
            raise ContractError(
                f"{what} has dimension {n} but the reflectors act on dimension {self.base_dim}"
            )

    def apply_qt(self, B):
        """Return ``Q^T B``."""
        B, vec = _lift(B)
        self._check(B.shape[0], "B rows")
        B = np.array(B, order="F", copy=True)
        for j0, Vb, T in self._blocks():
            Bj = B[j0:]
            Bj -= Vb @ (T.T @ (Vb.T @ Bj))
        return B[:, 0] if vec else B

    def apply_q(self, B):
        """Return ``Q B``."""
        B, vec = _lift(B)
        self._check(B.shape[0], "B rows")
        B = np.array(B, order="F", copy=True)
        for j0, Vb, T in reversed(self._blocks()):
            Bj = B[j0:]
            Bj -= Vb @ (T @ (Vb.T @ Bj))
        return B[:, 0] if vec else B

    def apply_right(self, B):
        """Return ``B Q``."""
        B = as_matrix(B, "B", check_finite=False)
        self._check(B.shape[1], "B columns")
        B = np.array(B, order="F", copy=True)
        for j0, Vb, T in self._blocks():
            Bj = B[:, j0:]
            Bj -= ((Bj @ Vb) @ T) @ Vb.T
        return B

    def to_dense(self):
        """Materialize ``Q`` as a ``base_dim`` x ``base_dim`` array."""
        return self.apply_q(np.eye(self.base_dim, order="F"))


def _lift(B):
    B = np.asarray(B, dtype=np.float64)
    if B.ndim == 1:
        return B[:, None], True
    return as_matrix(B, "B", check_finite=False), False


def householder_qr(A, block_size=DEFAULT_BLOCK):
    """Blocked Householder QR factorization ``A = Q [R; 0]``.

    Parameters
    ----------
    A : (m, n) array_like
    block_size : int
        Panel width for the compact WY trailing update.

    Returns
    -------
    Q : ReflectorSet
        Full ``m`` x ``m`` orthogonal factor, ``min(m, n)`` reflectors.
    R : ndarray, shape (min(m, n), n)
        Upper trapezoidal with nonnegative diagonal.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m < 1 or n < 1:
        raise ContractError(f"householder_qr needs a nonempty matrix, got {m}x{n}")
    W = np.array(A, order="F", copy=True)
    k = min(m, n)
    V = np.zeros((m, k), order="F")
    tau = np.zeros(k)

    for j0 in range(0, k, block_size):
        j1 = min(j0 + block_size, k)
        for j in range(j0, j1):
            v, t, beta = _house(W[j:, j])
            W[j, j] = beta
            W[j + 1:, j] = 0.0
            V[j:, j] = v
            tau[j] = t
            if t != 0.0 and j + 1 < j1:
                panel = W[j:, j + 1:j1]
                panel -= t * np.outer(v, v @ panel)
        if j1 < n and np.any(tau[j0:j1]):
            Vb = V[j0:, j0:j1]
            T = _larft(Vb, tau[j0:j1])
            trail = W[j0:, j1:]
            trail -= Vb @ (T.T @ (Vb.T @ trail))

    Q = ReflectorSet(V, tau, block_size)
    return Q, np.triu(W[:k, :])


def apply_q_transpose(Q, B, from_left=True):
    """Apply an implicit orthogonal factor without forming it.

    Returns ``Q^T B`` when ``from_left`` is true and ``B Q`` otherwise.
    """
    if from_left:
        return Q.apply_qt(B)
    return Q.apply_right(B)


def apply_q(Q, B):
    """Return ``Q B`` for an implicit orthogonal factor ``Q``."""
    return Q.apply_q(B)
