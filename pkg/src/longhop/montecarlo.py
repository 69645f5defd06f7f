"""Seeded slot-level simulation of one-pass and multi-pass contention.

Scalar entry points (:func:`simulate_slot`, :func:`simulate_one_pass`,
:func:`simulate_multi_pass`) run a single slot or hop with a caller-supplied
generator.  :func:`run_trials` runs many hops vectorized over fixed-size
blocks of trials; block ``b`` always draws from the substream seeded by
``(seed, b)``, so results do not depend on how blocks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (Collision, DecisionFunction, HopResult, Placement, Silence, Winner,
                   as_placement)

BLOCK_SIZE = 1 << 14
DEFAULT_MAX_ROUNDS = 10_000

ONE_PASS = "one-pass"
MULTI_PASS = "multi-pass"


@dataclass(frozen=True)
class SimConfig:
    trials: int = 100_000
    seed: int = 0
    max_rounds: int = DEFAULT_MAX_ROUNDS
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class EstimateWithError:
    mean: float
    std_error: float
    trials: int

    def __float__(self):
        return self.mean

    def z_score(self, expected: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.mean == expected else math.copysign(math.inf, self.mean - expected)
        return (self.mean - expected) / self.std_error


@dataclass(frozen=True)
class FixedPlacement:
    placement: Placement


@dataclass(frozen=True)
class RandomPlacement:
    n: int
    line_length: float = 1.0


PlacementSource = Union[FixedPlacement, RandomPlacement]


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(seed, *key)``."""
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def _require_nodes(xs: Placement):
    if xs.n == 0:
        raise ValueError("placement must contain at least one node")


def contend(g: DecisionFunction, x: np.ndarray, m: int, rng: np.random.Generator):
    """One slot among nodes at normalized distance estimates ``x``."""
    transmit = rng.random(len(x)) < g(x, m)
    count = int(transmit.sum())
    if count == 0:
        return Silence()
    if count == 1:
        return Winner(int(np.flatnonzero(transmit)[0]))
    return Collision(count)


def contend_until_winner(g: DecisionFunction, x: np.ndarray, rng: np.random.Generator,
                         max_rounds: int = DEFAULT_MAX_ROUNDS):
    """Repeat slots until one node transmits alone.

    Returns ``(winner_index or None, rounds_used)``.  Rounds are drawn in
    growing chunks so long elections stay vectorized.
    """
    x = np.asarray(x, dtype=float)
    m, chunk = 0, 4
    static = g(x, 0) if g.round_independent else None
    while m < max_rounds:
        k = min(chunk, max_rounds - m)
        if static is not None:
            probs = static
        else:
            probs = np.stack([g(x, r) for r in range(m, m + k)])
        transmit = rng.random((k, len(x))) < probs
        unique = np.flatnonzero(transmit.sum(axis=1) == 1)
        if unique.size:
            row = int(unique[0])
            return int(np.argmax(transmit[row])), m + row + 1
        m += k
        chunk = min(2 * chunk, 1024)
    return None, max_rounds


def simulate_slot(g: DecisionFunction, xs, m: int, rng: np.random.Generator):
    xs = as_placement(xs)
    _require_nodes(xs)
    return contend(g, xs.normalized, m, rng)


def simulate_one_pass(g: DecisionFunction, xs, rng: np.random.Generator) -> HopResult:
    xs = as_placement(xs)
    outcome = simulate_slot(g, xs, 0, rng)
    progress = xs.positions[outcome.index] if isinstance(outcome, Winner) else 0.0
    return HopResult(outcome, progress, 1)


def simulate_multi_pass(g: DecisionFunction, xs, rng: np.random.Generator,
                        max_rounds: int = DEFAULT_MAX_ROUNDS) -> HopResult:
    xs = as_placement(xs)
    for m in range(max_rounds):
        outcome = simulate_slot(g, xs, m, rng)
        if isinstance(outcome, Winner):
            return HopResult(outcome, xs.positions[outcome.index], m + 1)
    return HopResult(Silence(), 0.0, max_rounds, truncated=True)


def sample_positions(n: int, line_length: float, rng: np.random.Generator) -> Placement:
    if n < 0:
        raise ValueError("n must be >= 0")
    if not line_length > 0:
        raise ValueError("line_length must be positive")
    return Placement(tuple(rng.uniform(0.0, line_length, n)), line_length)


@dataclass(frozen=True)
class TrialBatch:
    """Per-trial outcomes; ``winner == -1`` marks a trial without a winner."""

    progress: np.ndarray
    rounds: np.ndarray
    winner: np.ndarray
    truncated: np.ndarray
    n: int

    @property
    def trials(self) -> int:
        return len(self.progress)

    @property
    def truncated_count(self) -> int:
        return int(self.truncated.sum())

    def progress_estimate(self) -> EstimateWithError:
        return summarize(self.progress)

    def mean_rounds(self) -> float:
        done = self.rounds[~self.truncated]
        return math.fsum(done.tolist()) / len(done) if len(done) else math.nan

    def winner_counts(self) -> np.ndarray:
        won = self.winner[self.winner >= 0]
        return np.bincount(won, minlength=self.n)


def summarize(values: np.ndarray) -> EstimateWithError:
    values = np.asarray(values, dtype=float)
    t = len(values)
    mean = math.fsum(values.tolist()) / t
    if t < 2:
        return EstimateWithError(mean, 0.0, t)
    dev = values - mean
    var = math.fsum((dev * dev).tolist()) / (t - 1)
    return EstimateWithError(mean, math.sqrt(var / t), t)


def _block(mode, g, source, block_index, size, cfg):
    rng = substream(cfg.seed, block_index)
    if isinstance(source, RandomPlacement):
        n, L = source.n, source.line_length
        pos = rng.uniform(0.0, L, (size, n))
    else:
        n, L = source.placement.n, source.placement.line_length
        pos = np.broadcast_to(source.placement.array, (size, n))
    x = pos / L
    progress = np.zeros(size)
    rounds = np.ones(size, dtype=np.int64)
    winner = np.full(size, -1, dtype=np.int64)
    truncated = np.zeros(size, dtype=bool)

    rounds_cap = 1 if mode == ONE_PASS else cfg.max_rounds
    active = np.arange(size)
    for m in range(rounds_cap):
        if active.size == 0:
            break
        xa = x[active]
        transmit = rng.random(xa.shape) < g(xa, m)
        unique = transmit.sum(axis=1) == 1
        done = active[unique]
        idx = np.argmax(transmit[unique], axis=1)
        winner[done] = idx
        progress[done] = pos[done, idx]
        rounds[done] = m + 1
        active = active[~unique]
    if mode == MULTI_PASS:
        truncated[active] = True
        rounds[active] = rounds_cap
    return progress, rounds, winner, truncated


def run_trials(mode: str, g: DecisionFunction, source: PlacementSource, cfg: SimConfig) -> TrialBatch:
    """Run ``cfg.trials`` independent hops; positions are resampled per trial for random sources."""
    if mode not in (ONE_PASS, MULTI_PASS):
        raise ValueError(f"unknown mode {mode!r}")
    if isinstance(source, Placement):
        source = FixedPlacement(source)
    if isinstance(source, FixedPlacement):
        _require_nodes(source.placement)
        n = source.placement.n
    else:
        if source.n < 1:
            raise ValueError("random placement needs n >= 1")
        n = source.n
    sizes = [BLOCK_SIZE] * (cfg.trials // BLOCK_SIZE)
    if cfg.trials % BLOCK_SIZE:
        sizes.append(cfg.trials % BLOCK_SIZE)

    def work(item):
        b, size = item
        return _block(mode, g, source, b, size, cfg)

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(work, enumerate(sizes)))
    else:
        parts = [work(item) for item in enumerate(sizes)]
    cols = [np.concatenate(c) for c in zip(*parts)]
    return TrialBatch(*cols, n=n)


def estimate_expected_hop(mode: str, g: DecisionFunction, source: PlacementSource,
                          cfg: SimConfig) -> EstimateWithError:
    return run_trials(mode, g, source, cfg).progress_estimate()
