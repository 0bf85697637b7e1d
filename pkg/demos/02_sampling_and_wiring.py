"""Draw a uniform network from a hook-walk tableau and save its wiring diagram."""
import sys
from pathlib import Path

from rsnlab.networks import SortingNetwork, edelman_greene, wiring_svg
from rsnlab.spacings import first_swap_time, spacing_sp1
from rsnlab.tableaux import make_staircase, sample_syt

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out")
out.mkdir(exist_ok=True)

T = sample_syt(make_staircase(8), seed=2024)
net = edelman_greene(T)
print("tableau rows:", [list(r) for r in T.rows])
print("network:", net.swaps)
print("first swap 1 at", first_swap_time(net, 1), "| spacing of swap 4 around 0:", spacing_sp1(net, 4))
(out / "random_n8.svg").write_text(wiring_svg(net))

# the five-wire example used throughout the tests
fig = SortingNetwork(5, (2, 1, 3, 2, 4, 3, 4, 1, 2, 1))
(out / "five_wires.svg").write_text(wiring_svg(fig))
print("wrote", sorted(p.name for p in out.iterdir()))
