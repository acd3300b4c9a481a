"""Estimate the nuclear norm of a matrix with S-shaped singular value decay
and compare it with the exact value from the Jacobi oracle.

Run with ``python demos/01_nuclear_norm_estimate.py``.
"""

import time

import numpy as np

from nucnorm import (
    RandNNConfig,
    error_bound_check,
    nuclear_norm,
    prescribed_spectrum_matrix,
    rand_nn,
    s_shaped_spectrum,
    schatten_p,
    svd_values,
)

n = 600
A = prescribed_spectrum_matrix(s_shaped_spectrum(n), n, seed=0)

t0 = time.perf_counter()
est = rand_nn(A, RandNNConfig(block_size=64, power_iters=2, seed=1))
t_est = time.perf_counter() - t0

t0 = time.perf_counter()
truth = svd_values(A)
t_exact = time.perf_counter() - t0

print(f"estimated nuclear norm  {nuclear_norm(est):.10f}   ({t_est:.2f} s)")
print(f"exact nuclear norm      {truth.sum():.10f}   ({t_exact:.2f} s)")
print(f"relative error          {abs(nuclear_norm(est) - truth.sum()) / truth.sum():.2e}")

for p in (2, 4):
    print(f"Schatten-{p}: estimate {schatten_p(est, p):.10f}, exact {schatten_p(truth, p):.10f}")

lhs, holds = error_bound_check(truth, est)
print(f"l2 error of the spectrum {lhs:.3e} <= bound {est.bound_fro:.3e}: {holds}")
