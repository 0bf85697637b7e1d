"""The kernels side by side: Hermite sums, residue sums, finite n."""
import math

from rsnlab.kernels import (
    conditioned_kernel,
    finite_n_kernel,
    kernel_K,
    limiting_kernel,
    limiting_kernel_hermite,
    limiting_kernel_series,
)
from rsnlab.tableaux import make_staircase

for u in (0.25, 0.5, 1.0, 2.0):
    print(f"u={u}: conditioned level 3 {conditioned_kernel(1, 3, u, 3, u):.10f}, 2u e^(-u^2) {2 * u * math.exp(-u * u):.10f}")

u1, u2 = 0.3, 0.7
print("level 4, three routes:", limiting_kernel_series(2, u1, u2), limiting_kernel_hermite(2, u1, u2), limiting_kernel(4, u1, 4, u2))
print("symmetric gauge:", kernel_K(2, u1, u2))

# finite n approaches the limit on level 2
for n in (10, 50, 400):
    print(f"n={n}: K(2,0.5;2,0.5) = {finite_n_kernel(make_staircase(n), 2, 0.5, 2, 0.5):.5f}")
print("limit:", 2 / math.sqrt(math.pi) * math.exp(-0.25))
