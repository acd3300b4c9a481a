"""Early termination on a numerically low-rank matrix: processing stops once a
block's largest estimated singular value drops below a threshold, and the
remaining estimates are reported as zero.
"""

import time

import numpy as np

from nucnorm import RandNNConfig, nuclear_norm, prescribed_spectrum_matrix, rand_nn

n, rank = 800, 60
spec = np.concatenate([np.linspace(1.0, 0.1, rank), np.full(n - rank, 1e-12)])
A = prescribed_spectrum_matrix(spec, n, seed=3)

for threshold in (0.0, 1e-8):
    t0 = time.perf_counter()
    est = rand_nn(A, RandNNConfig(block_size=20, power_iters=2, early_stop_threshold=threshold))
    elapsed = time.perf_counter() - t0
    print(f"threshold={threshold:g}: blocks={est.blocks_processed}, stopped early={est.terminated_early}, "
          f"nuclear norm={nuclear_norm(est):.12f} (exact {spec.sum():.12f}), {elapsed:.2f} s")
