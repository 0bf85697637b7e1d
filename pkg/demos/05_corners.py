"""Bottom-left corner of a large random tableau next to nested aGUE spectra."""
from rsnlab.experiments import mc_corners_vs_tableaux

r = mc_corners_vs_tableaux(n=300, L=6, samples=20000, seed=3)
for coord, ks in r.summary["ks"].items():
    print(f"(level, rank) = ({coord}): two-sample KS {ks:.4f}")
print("interlacing:", r.summary["interlacing_tableau"], r.summary["interlacing_ague"])
