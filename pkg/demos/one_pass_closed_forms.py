"""
One-pass contention on a uniformly random line
==============================================

Every node within range decides once whether to answer.  With a flat
probability it has no preference for distance; with ``x**(n-1)`` the far
nodes answer far more often.  Quadrature, closed form and simulation should
agree to within sampling error.
"""

import numpy as np

from longhop import (Constant, PowerLaw, RandomPlacement, SimConfig, closed_form_one_pass,
                     estimate_expected_hop, expected_hop_one_pass_random)

cfg = SimConfig(trials=200_000, seed=1)
print(f"{'n':>4} {'family':>8} {'closed':>10} {'quad':>10} {'monte carlo':>20}")
for n in (2, 5, 10, 50):
    for family, g in (("uniform", Constant(1 / n)), ("power", PowerLaw(n - 1))):
        closed = closed_form_one_pass(family, n)
        quad = expected_hop_one_pass_random(g, n)
        est = estimate_expected_hop("one-pass", g, RandomPlacement(n), cfg)
        print(f"{n:>4} {family:>8} {closed:10.6f} {quad:10.6f} {est.mean:10.6f} +- {est.std_error:.6f}")

###############################################################################
# The ratio between the two families approaches two as the neighbourhood grows.

for n in (10, 100, 1000, 10_000):
    ratio = closed_form_one_pass("power", n) / closed_form_one_pass("uniform", n)
    print(f"n={n:>6}  ratio={ratio:.6f}  2n/(n+1)={2 * n / (n + 1):.6f}")

print("limits:", 1 / (2 * np.e), 1 / np.e)
