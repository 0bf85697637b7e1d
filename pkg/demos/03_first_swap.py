"""First time swap k appears, rescaled by n^(3/2)/2, against the smallest
positive eigenvalue law computed as a k x k determinant."""
import numpy as np

from rsnlab.ague import sample_tfs_batch
from rsnlab.experiments import mc_first_swap
from rsnlab.fredholm import survival_tfs

for k in (1, 2):
    r = mc_first_swap(200, k, samples=20000, seed=42)
    ks = r.summary["ks"]
    print(f"k={k}: KS {ks['statistic']:.4f} +- {ks['se']:.4f} (tolerance {ks['tolerance']})")

# the same law straight from 2k x 2k matrices
mats = sample_tfs_batch(2, 100000, seed=1)
for t in (0.2, 0.6, 1.0, 1.4):
    print(f"t={t}: P(T > t) matrices {np.mean(mats > t):.4f}, determinant {survival_tfs(2, t):.4f}")
