"""
Fixed placements
================

Three hand-built placements stress the decision functions: evenly spread
nodes, nodes bunched near the sender, and nodes bunched at the edge of range.
The values below are exact, computed from the product formula.
"""

from longhop import Constant, LinearScaled, PowerLaw, expected_hop_one_pass_fixed, scenario_positions

SCENARIOS = ("uniform", "unfavourable", "favourable")

for n in (10, 50, 200):
    print(f"n = {n}")
    for name, g in (("1/n", Constant(1 / n)), ("x^n", PowerLaw(n)), ("x/n", LinearScaled(n))):
        row = [expected_hop_one_pass_fixed(g, scenario_positions(s, n)) for s in SCENARIOS]
        print(f"  {name:>4}  " + "  ".join(f"{s}={v:.5f}" for s, v in zip(SCENARIOS, row)))

# x^n is useless when everybody sits at the border: all fire, all collide.
