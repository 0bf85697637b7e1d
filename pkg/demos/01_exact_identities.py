"""Exhaustive checks for tiny networks: counts, the tableau bijection and the
circle identities, all in exact arithmetic."""
from fractions import Fraction

from rsnlab.networks import edelman_greene, enumerate_networks, stanley_count
from rsnlab.spacings import check_circle_relations, circle_from_networks, circle_stats, rho_exact
from rsnlab.tableaux import count_syt, enumerate_syt, make_staircase

for n in (3, 4, 5):
    nets = enumerate_networks(n)
    images = {edelman_greene(T) for T in enumerate_syt(make_staircase(n))}
    print(f"n={n}: formula {stanley_count(n)}, enumerated {len(nets)}, tableaux {count_syt(make_staircase(n))}, "
          f"bijective {images == set(nets)}")

n = 4
for k in range(1, n):
    rep = check_circle_relations(circle_stats(circle_from_networks(n, k)))
    worst = max(abs(v) for v in rep.resid1 + rep.resid2)
    print(f"n={n} k={k}: rho = {rep.rho} (hook ratio {rho_exact(n, k)}), worst residual {worst}")

# the same report as CSV, rationals written as p/q
print(check_circle_relations(circle_stats(circle_from_networks(3, 1))).to_csv())
assert rho_exact(4, 1) == Fraction(5, 16)
