"""Hop-by-hop message relay along a line of radio nodes.

A sender's message is heard by every node whose received power (from the
sender's own, possibly perturbed, transmit power) clears the receiver
sensitivity.  Each receiver estimates its distance assuming nominal power,
normalizes it by the nominal range and contends with the chosen algorithm.
By default only nodes ahead of the sender contend.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .core import DecisionFunction, Winner
from .montecarlo import DEFAULT_MAX_ROUNDS, MULTI_PASS, ONE_PASS, contend, contend_until_winner
from .radio import RadioConfig, estimate_distance_dbm, perturb_tx_power, received_power_dbm

RANDOM = "random"
EQUALLY_SPACED = "equally-spaced"


class Termination(str, enum.Enum):
    REACHED_END = "reached-end"
    DIED = "died"
    TRUNCATED_ROUNDS = "truncated-rounds"
    MAX_HOPS = "max-hops"


@dataclass(frozen=True)
class LineNetwork:
    positions: np.ndarray  # sorted ascending, metres
    tx_power_dbm: np.ndarray
    line_length_m: float
    radio: RadioConfig

    @property
    def nominal_range_m(self) -> float:
        return self.radio.nominal_range_m

    @property
    def size(self) -> int:
        return len(self.positions)

    @property
    def density(self) -> float:
        return expected_density(self.size, self.line_length_m, self.nominal_range_m)


def expected_density(N: int, d_m: float, r_m: float) -> float:
    """Expected number of nodes within range on one side of a sender: ``N / d * r``."""
    return N / d_m * r_m


def build_line_network(N: int, d_m: float, radio: RadioConfig, placement: str = RANDOM,
                       rng: Optional[np.random.Generator] = None) -> LineNetwork:
    if N < 1:
        raise ValueError(f"need at least one node, got N={N}")
    if not d_m > 0:
        raise ValueError(f"line length must be positive, got {d_m}")
    rng = rng if rng is not None else np.random.default_rng()
    if placement == RANDOM:
        pos = np.sort(rng.uniform(0.0, d_m, N))
    elif placement == EQUALLY_SPACED:
        pos = np.arange(1, N + 1) * d_m / (N + 1)
    else:
        raise ValueError(f"unknown placement {placement!r}")
    tx = np.asarray(perturb_tx_power(radio, rng, N), dtype=float)
    return LineNetwork(pos, tx, float(d_m), radio)


class Hop(NamedTuple):
    sender_index: int
    winner_index: int
    raw_distance_m: float
    normalized_distance: float
    sender_position_m: float
    contenders: int
    rounds: int


@dataclass
class RelayTrace:
    hops: list = field(default_factory=list)
    terminated_reason: Termination = Termination.DIED
    # contenders in the final, failed contention (None if the last hop succeeded)
    failed_contenders: Optional[int] = None
    line_length_m: float = math.nan
    range_m: float = math.nan

    @property
    def normalized_distances(self) -> list:
        return [h.normalized_distance for h in self.hops]


def _receivers(net: LineNetwork, sender: int, bidirectional: bool):
    offset = net.positions - net.positions[sender]
    dist = np.abs(offset) if bidirectional else offset
    idx = np.flatnonzero(dist > 0)
    if idx.size == 0:
        return idx, dist[idx], np.empty(0)
    rx = received_power_dbm(net.radio, dist[idx], net.tx_power_dbm[sender])
    heard = np.asarray(rx) >= net.radio.sensitivity_dbm
    return idx[heard], dist[idx][heard], np.asarray(rx)[heard]


def run_message_relay(net: LineNetwork, algorithm: str, g: DecisionFunction, start_index: int = 0,
                      rng: Optional[np.random.Generator] = None, max_hops: Optional[int] = None,
                      max_rounds: int = DEFAULT_MAX_ROUNDS, bidirectional: bool = False) -> RelayTrace:
    """Relay one message from ``start_index`` until it reaches the last node or stops."""
    if algorithm not in (ONE_PASS, MULTI_PASS):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if not 0 <= start_index < net.size:
        raise ValueError(f"start_index {start_index} outside network of {net.size} nodes")
    rng = rng if rng is not None else np.random.default_rng()
    r = net.nominal_range_m
    if max_hops is None:
        max_hops = max(1, math.ceil(10 * net.line_length_m / r))
    last = net.size - 1
    trace = RelayTrace(line_length_m=net.line_length_m, range_m=r)
    sender = start_index
    while True:
        if trace.hops and sender == last:
            trace.terminated_reason = Termination.REACHED_END
            return trace
        if len(trace.hops) >= max_hops:
            trace.terminated_reason = Termination.MAX_HOPS
            return trace
        idx, dist, rx = _receivers(net, sender, bidirectional)
        if idx.size == 0:
            trace.terminated_reason = Termination.DIED
            return trace
        x_hat = estimate_distance_dbm(net.radio, rx, rng) / r
        x_hat = np.atleast_1d(x_hat)
        if algorithm == ONE_PASS:
            outcome = contend(g, x_hat, 0, rng)
            win, rounds = (outcome.index if isinstance(outcome, Winner) else None), 1
        else:
            win, rounds = contend_until_winner(g, x_hat, rng, max_rounds)
        if win is None:
            trace.failed_contenders = int(idx.size)
            trace.terminated_reason = (Termination.DIED if algorithm == ONE_PASS
                                       else Termination.TRUNCATED_ROUNDS)
            return trace
        w = int(idx[win])
        raw = float(dist[win])
        trace.hops.append(Hop(sender, w, raw, raw / r, float(net.positions[sender]),
                              int(idx.size), rounds))
        sender = w


@dataclass(frozen=True)
class HopStatistics:
    mean: float
    std_dev: float  # sample (n - 1) estimator; nan for a single hop
    count: int

    def __iter__(self):
        return iter((self.mean, self.std_dev, self.count))


def hop_distance_statistics(traces, exclude_tail: bool = False) -> HopStatistics:
    """Mean and sample standard deviation of normalized hop distances over all traces.

    ``exclude_tail`` drops hops sent from the last nominal range of the line,
    where fewer forward neighbours exist.
    """
    values = []
    for t in traces:
        for h in t.hops:
            if exclude_tail and h.sender_position_m > t.line_length_m - t.range_m:
                continue
            values.append(h.normalized_distance)
    if not values:
        raise ValueError("no hops to summarize")
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return HopStatistics(mean, math.nan, n)
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return HopStatistics(mean, math.sqrt(var), n)


def relay_trials(N: int, d_m: float, radio: RadioConfig, algorithm: str, g: DecisionFunction,
                 trials: int, seed: int, key: tuple = (), placement: str = RANDOM,
                 max_rounds: int = DEFAULT_MAX_ROUNDS, bidirectional: bool = False) -> list:
    """Independent relay trials, each on a freshly built network.

    Trial ``t`` draws from the substream ``(seed, *key, t)``.
    """
    traces = []
    for t in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, *key, t]))
        net = build_line_network(N, d_m, radio, placement, rng)
        traces.append(run_message_relay(net, algorithm, g, 0, rng, max_rounds=max_rounds,
                                        bidirectional=bidirectional))
    return traces
