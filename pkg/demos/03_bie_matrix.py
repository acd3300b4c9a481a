"""The single-layer boundary integral matrix: a slowly decaying, ill-conditioned
spectrum. Prints the per-value relative errors at a few indices, the quantity
one would plot against the index.
"""

import numpy as np

from nucnorm import RandNNConfig, bie_single_layer_matrix, rand_nn, svd_values

n = 512
A = bie_single_layer_matrix(n)
truth = svd_values(A)
print(f"sigma_1 = {truth[0]:.4f}, sigma_n = {truth[-1]:.3e}, ratio = {truth[0] / truth[-1]:.0f}")

est = rand_nn(A, RandNNConfig(block_size=64, power_iters=2, seed=0))
approx = np.sort(est.values)[::-1]
rel = np.abs(truth - approx) / truth
for i in (0, 1, 63, 64, 127, 255, 511):
    print(f"i={i + 1:4d}  true={truth[i]:.6e}  est={approx[i]:.6e}  rel_err={rel[i]:.2e}")
print(f"bound on the l2 spectrum error: {est.bound_fro:.3e}")
