"""Parameter sweep over line-network relay experiments.

The default grid: N in {20, 200}, d in
{200, ..., 7500} metres, the opaque parameter m in {-5, 0, 1, 5}, r = 130 m,
500 trials per combination.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from .chainsim import RANDOM, expected_density, hop_distance_statistics, relay_trials
from .core import decision_family
from .montecarlo import DEFAULT_MAX_ROUNDS, ONE_PASS
from .radio import RadioConfig

TABLE_N = (20, 200)
TABLE_D = (200, 300, 400, 600, 1000, 2500, 5000, 7500)
TABLE_M = (-5, 0, 1, 5)
TABLE_R = 130.0

COLUMNS = ("N", "d", "m", "r", "density_n", "algorithm", "g", "placement", "trials",
           "mean_norm_dist", "std_dev", "hop_count")


@dataclass(frozen=True)
class ExperimentSpec:
    N_values: tuple = TABLE_N
    d_values: tuple = TABLE_D
    m_values: tuple = TABLE_M
    r: float = TABLE_R
    trials: int = 500
    seed: int = 0
    algorithm: str = ONE_PASS
    g_family: str = "power"
    placement: str = RANDOM
    tx_power_dbm: float = -5.0
    power_jitter: float = 0.1
    bind_m_to_tx_power: bool = False
    exclude_tail: bool = False
    max_rounds: int = DEFAULT_MAX_ROUNDS
    workers: int = 1

    def __post_init__(self):
        for name in ("N_values", "d_values", "m_values"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.r > 0:
            raise ValueError("r must be positive")

    def combinations(self):
        for N in self.N_values:
            for d in self.d_values:
                for m in self.m_values:
                    yield N, d, m

    def to_dict(self) -> dict:
        return asdict(self)


def _radio_for(spec: ExperimentSpec, m) -> RadioConfig:
    radio = RadioConfig.indoor(spec.r, spec.tx_power_dbm, spec.power_jitter)
    if spec.bind_m_to_tx_power:
        # sensitivity stays fixed, so the nominal range moves with the power
        radio = radio.with_tx_power(float(m))
    return radio


def run_combination(spec: ExperimentSpec, index: int, N: int, d: float, m) -> dict:
    radio = _radio_for(spec, m)
    r = radio.nominal_range_m
    density = expected_density(N, d, r)
    g = decision_family(spec.g_family, density)
    traces = relay_trials(N, d, radio, spec.algorithm, g, spec.trials, spec.seed, key=(index,),
                          placement=spec.placement, max_rounds=spec.max_rounds)
    try:
        mean, std, count = hop_distance_statistics(traces, spec.exclude_tail)
    except ValueError:
        mean, std, count = math.nan, math.nan, 0
    return {"N": N, "d": d, "m": m, "r": r, "density_n": density, "algorithm": spec.algorithm,
            "g": spec.g_family, "placement": spec.placement, "trials": spec.trials,
            "mean_norm_dist": mean, "std_dev": std, "hop_count": count}


def run_experiment(spec: ExperimentSpec) -> list:
    """One row per (N, d, m) combination, in grid order regardless of ``workers``."""
    combos = list(enumerate(spec.combinations()))

    def work(item):
        i, (N, d, m) = item
        return run_combination(spec, i, N, d, m)

    if spec.workers > 1:
        with ThreadPoolExecutor(spec.workers) as pool:
            return list(pool.map(work, combos))
    return [work(c) for c in combos]
