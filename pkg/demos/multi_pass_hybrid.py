"""
Repeating the contention until someone wins
===========================================

With a constant probability every node is equally likely to win eventually,
so the mean progress is one half.  Letting the first round favour distant
nodes and falling back to ``1/n`` afterwards recovers much of the one-pass
advantage without the risk of a silent hop.
"""

from longhop import (Constant, Hybrid, PowerLaw, RandomPlacement, SimConfig, closed_form_multipass,
                     estimate_expected_hop, run_trials)

cfg = SimConfig(trials=200_000, seed=2)
for n in (2, 10, 50):
    flat = estimate_expected_hop("multi-pass", Constant(1 / n), RandomPlacement(n), cfg)
    hybrid = Hybrid(PowerLaw(n - 1), Constant(1 / n))
    est = estimate_expected_hop("multi-pass", hybrid, RandomPlacement(n), cfg)
    print(f"n={n:>3}  flat {flat.mean:.4f} (0.5)   hybrid {est.mean:.4f} "
          f"({closed_form_multipass('hybrid', n):.4f})")

###############################################################################
# How many rounds does it take?  For g = 1/n the success chance per round is
# (1 - 1/n)**(n-1), so the wait is geometric with mean close to e.

batch = run_trials("multi-pass", Constant(1 / 20), RandomPlacement(20), cfg)
print("mean rounds at n=20:", round(batch.mean_rounds(), 3), "expected", round(1 / (1 - 1 / 20) ** 19, 3))
