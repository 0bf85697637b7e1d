"""Histogram distances for the two spacing laws at n = 200."""
from rsnlab.experiments import mc_conditional_spacing, mc_spacing

for k in (1, 2):
    sp = mc_spacing(200, k, samples=20000, seed=7)
    cs = mc_conditional_spacing(200, k, samples=20000, seed=7)
    print(f"k={k}: spacing TV {sp.summary['tv']['statistic']:.4f}, "
          f"mean {sp.summary['mean_scaled']:.4f} vs limit {sp.summary['limit_mean']:.4f}; "
          f"conditional TV {cs.summary['tv']['statistic']:.4f}")
    if k == 1:
        print("  conditional spacing vs 1 - exp(-x^2): KS", round(cs.summary["ks_rayleigh"]["statistic"], 4))
