"""How the number of power iterations q affects accuracy and the a-posteriori
bound, averaged over several random seeds.
"""

import numpy as np

from nucnorm import (
    RandNNConfig,
    nuclear_norm,
    prescribed_spectrum_matrix,
    rand_nn,
    s_shaped_spectrum,
    svd_values,
)

n, b = 300, 25
A = prescribed_spectrum_matrix(s_shaped_spectrum(n), n, seed=0)
truth = svd_values(A)

print(" q   mean nuclear rel err   mean bound   mean per-value rel err")
for q in (0, 1, 2, 3):
    rel, bounds, per_value = [], [], []
    for seed in range(10):
        est = rand_nn(A, RandNNConfig(block_size=b, power_iters=q, seed=seed))
        rel.append(abs(nuclear_norm(est) - truth.sum()) / truth.sum())
        bounds.append(est.bound_fro)
        per_value.append(np.mean(np.abs(np.sort(est.values)[::-1] - truth) / truth))
    print(f" {q}   {np.mean(rel):20.3e}   {np.mean(bounds):10.3e}   {np.mean(per_value):22.3e}")
