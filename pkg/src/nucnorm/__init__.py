"""Randomized estimation of all singular values of a dense matrix.

Typical use::

    from nucnorm import rand_nn, RandNNConfig, nuclear_norm

    est = rand_nn(A, RandNNConfig(block_size=64, power_iters=2))
    nuclear_norm(est), est.bound_fro
"""

from .jacobi import ConvergenceError, svd_values
from .linalg import (
    ContractError,
    ReflectorSet,
    apply_q,
    apply_q_transpose,
    frobenius_norm,
    householder_qr,
    matmul,
)
from .randnn import (
    RandNNConfig,
    SpectrumEstimate,
    error_bound_check,
    nuclear_norm,
    power_sample,
    rand_nn,
    schatten_p,
    step_nn,
)
from .rng import SeededRng, gaussian_matrix
from .testmat import bie_single_layer_matrix, prescribed_spectrum_matrix, s_shaped_spectrum

__all__ = [
    "ContractError",
    "ConvergenceError",
    "RandNNConfig",
    "ReflectorSet",
    "SeededRng",
    "SpectrumEstimate",
    "apply_q",
    "apply_q_transpose",
    "bie_single_layer_matrix",
    "error_bound_check",
    "frobenius_norm",
    "gaussian_matrix",
    "householder_qr",
    "matmul",
    "nuclear_norm",
    "power_sample",
    "prescribed_spectrum_matrix",
    "rand_nn",
    "s_shaped_spectrum",
    "schatten_p",
    "step_nn",
    "svd_values",
]
