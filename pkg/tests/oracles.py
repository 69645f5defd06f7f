"""Reference computations that share no code path with the package."""

import itertools
import math


def enumerate_one_pass(probs, xs):
    """Sum over all 2**n transmit subsets.

    Returns (per-node win mass, no-winner mass, expected progress, total mass).
    """
    n = len(probs)
    win = [0.0] * n
    none = 0.0
    total = 0.0
    for subset in itertools.product((0, 1), repeat=n):
        mass = 1.0
        for on, p in zip(subset, probs):
            mass *= p if on else 1.0 - p
        total += mass
        if sum(subset) == 1:
            win[subset.index(1)] += mass
        else:
            none += mass
    progress = math.fsum(w * x for w, x in zip(win, xs))
    return win, none, progress, total


def markov_multipass(probs_by_round, n, rounds, stop_below=0.0):
    """Winner distribution by explicit round-by-round enumeration of subsets."""
    win = [0.0] * n
    alive = 1.0
    for m in range(rounds):
        if alive < stop_below:
            break
        w, _, _, _ = enumerate_one_pass(probs_by_round(m), [0.0] * n)
        for i in range(n):
            win[i] += alive * w[i]
        alive *= 1.0 - sum(w)
    return win, alive
