"""Exact and quadrature-based win probabilities and expected hop progress.

One-pass quantities follow from the single-slot winner probability
``g(x_i) * prod_{j != i} (1 - g(x_j))``.  Multi-pass quantities repeat the
slot until a unique transmitter appears; for round-independent ``g`` the
geometric series collapses to the normalized one-pass distribution.

Fixed placements report progress in the placement's own units, with ``g``
evaluated at ``position / line_length``.  Random placements draw ``n``
i.i.d. positions from ``density`` on ``[0, line_length]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import Constant, DecisionFunction, Hybrid, Placement, PowerLaw, as_placement
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate

Density = Callable[[np.ndarray], np.ndarray]


class NonTerminating(ValueError):
    """The multi-pass election can never produce a unique winner."""


class Truncated(RuntimeError):
    """The multi-pass series hit ``max_rounds`` with too much surviving mass."""

    def __init__(self, message, distribution):
        super().__init__(message)
        self.distribution = distribution


@dataclass(frozen=True)
class WinDistribution:
    probabilities: np.ndarray
    no_winner_mass: float

    @property
    def n(self) -> int:
        return len(self.probabilities)

    @property
    def total(self) -> float:
        return math.fsum(self.probabilities.tolist()) + self.no_winner_mass


def _unique_transmitter_mass(q: np.ndarray) -> np.ndarray:
    """``q_i * prod_{j != i} (1 - q_j)`` via prefix/suffix products (no division)."""
    stay = 1.0 - q
    before = np.concatenate(([1.0], np.cumprod(stay[:-1])))
    after = np.concatenate((np.cumprod(stay[::-1][:-1])[::-1], [1.0]))
    return q * before * after


def _fsum(values) -> float:
    return math.fsum(np.asarray(values, dtype=float).tolist())


def _nonempty(xs) -> Placement:
    xs = as_placement(xs)
    if xs.n == 0:
        raise ValueError("placement must contain at least one node")
    return xs


def win_prob_one_pass_fixed(g: DecisionFunction, xs) -> WinDistribution:
    xs = _nonempty(xs)
    probs = _unique_transmitter_mass(np.asarray(g(xs.normalized, 0)))
    return WinDistribution(probs, max(0.0, 1.0 - _fsum(probs)))


def expected_hop_one_pass_fixed(g: DecisionFunction, xs) -> float:
    xs = _nonempty(xs)
    dist = win_prob_one_pass_fixed(g, xs)
    return _fsum(xs.array * dist.probabilities)


def uniform_density(line_length: float = 1.0) -> Density:
    return lambda x: np.full_like(np.asarray(x, dtype=float), 1.0 / line_length)


def _check_density(density, line_length, quad):
    mass = integrate(density, 0.0, line_length, quad)
    if abs(mass - 1.0) > 100 * quad.abs_tolerance:
        raise ValueError(f"density integrates to {mass!r} on [0, {line_length}], expected 1")


def _moments(g: DecisionFunction, m: int, density: Density, line_length: float,
             quad: QuadratureSpec):
    """Per-node integrals of ``g`` at round ``m`` against ``density``.

    Returns ``(x g f, (1 - g) f, g f, x (1 - g) f, x f)`` integrated over the line.
    """
    L = line_length

    def gx(x):
        return np.asarray(g(np.asarray(x) / L, m), dtype=float)

    a = integrate(lambda x: x * gx(x) * density(x), 0.0, L, quad)
    b = integrate(lambda x: (1.0 - gx(x)) * density(x), 0.0, L, quad)
    s = integrate(lambda x: gx(x) * density(x), 0.0, L, quad)
    c = integrate(lambda x: x * (1.0 - gx(x)) * density(x), 0.0, L, quad)
    mean = integrate(lambda x: x * density(x), 0.0, L, quad)
    return a, b, s, c, mean


def expected_hop_one_pass_random(g: DecisionFunction, n: int, density: Optional[Density] = None,
                                 quad: QuadratureSpec = DEFAULT_QUAD, line_length: float = 1.0) -> float:
    """Expected one-slot progress for ``n`` i.i.d. random positions: ``n * A * B**(n-1)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    density = density or uniform_density(line_length)
    _check_density(density, line_length, quad)
    a, b, _, _, _ = _moments(g, 0, density, line_length, quad)
    return n * a * b ** (n - 1)


def closed_form_one_pass(kind: str, n: int) -> float:
    """``uniform``: g = 1/n gives ``(1 - 1/n)**(n-1) / 2``;
    ``power``: g = x**(n-1) gives ``n/(n+1) * (1 - 1/n)**(n-1)``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    survive = (1.0 - 1.0 / n) ** (n - 1)  # 0.0 ** 0 == 1.0 covers n = 1
    if kind == "uniform":
        return 0.5 * survive
    if kind == "power":
        return n / (n + 1) * survive
    raise ValueError(f"unknown one-pass closed form {kind!r}")


def win_prob_multipass_stationary(g: DecisionFunction, xs) -> WinDistribution:
    if not g.round_independent:
        raise ValueError("stationary formula requires a round-independent decision function")
    single = win_prob_one_pass_fixed(g, xs)
    success = _fsum(single.probabilities)
    if success == 0.0:
        raise NonTerminating("no round can ever produce a unique transmitter")
    return WinDistribution(single.probabilities / success, 0.0)


def win_prob_multipass_series(g: DecisionFunction, xs, residual_eps: float = 1e-12,
                              max_rounds: int = 1_000_000) -> WinDistribution:
    """Sum winner mass round by round until the surviving mass drops below ``residual_eps``."""
    if not residual_eps > 0:
        raise ValueError("residual_eps must be positive")
    xs = _nonempty(xs)
    x = xs.normalized
    acc = np.zeros(xs.n)
    comp = np.zeros(xs.n)  # Neumaier compensation per node
    survival = 1.0
    cached = None
    for m in range(max_rounds):
        if survival < residual_eps:
            break
        if cached is None or not g.round_independent:
            q = _unique_transmitter_mass(np.asarray(g(x, m)))
            cached = (q, _fsum(q))
        q, success = cached
        if g.round_independent and success == 0.0:
            break
        term = survival * q
        total = acc + term
        comp += np.where(np.abs(acc) >= np.abs(term), (acc - total) + term, (term - total) + acc)
        acc = total
        survival *= 1.0 - success
    acc = acc + comp
    dist = WinDistribution(acc, survival)
    if survival >= residual_eps:
        raise Truncated(f"surviving mass {survival:.3g} after series cut-off", dist)
    return dist


def expected_hop_multipass(g: DecisionFunction, xs, residual_eps: float = 1e-12,
                           max_rounds: int = 1_000_000) -> float:
    xs = _nonempty(xs)
    if g.round_independent:
        dist = win_prob_multipass_stationary(g, xs)
    else:
        dist = win_prob_multipass_series(g, xs, residual_eps, max_rounds)
    return _fsum(xs.array * dist.probabilities)


def _is_constant(g: DecisionFunction) -> bool:
    return isinstance(g, Constant) or (isinstance(g, PowerLaw) and g.exponent == 0)


def _constant_value(g):
    return g.p if isinstance(g, Constant) else 1.0


def multipass_random_is_structured(g: DecisionFunction) -> bool:
    """Whether the random-placement multi-pass expectation has an integral form."""
    return _is_constant(g) or (isinstance(g, Hybrid) and _is_constant(g.later))


def expected_hop_multipass_random(g: DecisionFunction, n: int, density: Optional[Density] = None,
                                  quad: QuadratureSpec = DEFAULT_QUAD, line_length: float = 1.0,
                                  trials: int = 200_000, seed: int = 0):
    """Multi-pass expected progress for ``n`` i.i.d. random positions.

    Constant ``g`` and ``Hybrid(first, Constant(p))`` reduce to products of
    one-dimensional integrals and return a float.  Any other ``g`` falls back
    to Monte Carlo and returns a
    :class:`~longhop.montecarlo.EstimateWithError`.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    density = density or uniform_density(line_length)
    _check_density(density, line_length, quad)

    if _is_constant(g):
        p = _constant_value(g)
        if p == 0.0 or (p == 1.0 and n >= 2):
            raise NonTerminating(f"constant transmit probability {p} never yields a unique winner")
        return integrate(lambda x: x * density(x), 0.0, line_length, quad)

    if isinstance(g, Hybrid) and _is_constant(g.later):
        p = _constant_value(g.later)
        if n >= 2 and p in (0.0, 1.0):
            raise NonTerminating("later rounds can never yield a unique winner")
        a, b, s, c, mean = _moments(g.first_round, 0, density, line_length, quad)
        if n == 1:
            return mean
        # First-round winner, plus the uniform later-round winner weighted by
        # the first round's failure mass; cross terms factorize over nodes.
        first = n * a * b ** (n - 1)
        fail_weighted = mean - (a * b ** (n - 1) + (n - 1) * c * s * b ** (n - 2))
        return first + fail_weighted

    from .montecarlo import SimConfig, estimate_expected_hop, RandomPlacement
    if not _is_uniform(density, line_length, quad):
        raise ValueError("Monte Carlo fallback only samples uniform densities")
    return estimate_expected_hop("multi-pass", g, RandomPlacement(n, line_length),
                                 SimConfig(trials=trials, seed=seed))


def _is_uniform(density, line_length, quad):
    xs = np.linspace(0.0, line_length, 33)
    return bool(np.allclose(density(xs), 1.0 / line_length, atol=100 * quad.abs_tolerance))


def closed_form_multipass(kind: str, n: int) -> float:
    """``constant``: 1/2; ``hybrid``: ``(1 + n/(n+1) * (1 - 1/n)**n) / 2``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if kind == "constant":
        return 0.5
    if kind == "hybrid":
        return 0.5 * (1.0 + n / (n + 1) * (1.0 - 1.0 / n) ** n)
    raise ValueError(f"unknown multi-pass closed form {kind!r}")


def hybrid_term_integrals(n: int) -> tuple[float, float, float]:
    """The three term-by-term integrals of the hybrid multi-pass expectation.

    ``term1`` is the first-round winner contribution, ``term2`` the uniform
    later-round winner, ``term3`` the later-round share removed when the first
    round already succeeded.  ``term1 + term2 - term3`` is the hybrid closed form.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    survive = (1.0 - 1.0 / n) ** (n - 1)
    term1 = n / (n + 1) * survive
    term2 = 0.5
    term3 = survive / (n + 1) + (n - 1) ** 2 / (2 * n * (n + 1)) * (1.0 - 1.0 / n) ** (n - 2)
    return term1, term2, term3


def success_mass(g: DecisionFunction, xs, m: int = 0) -> float:
    """Probability that round ``m`` alone produces a unique transmitter."""
    return _fsum(win_prob_one_pass_fixed_round(g, xs, m))


def win_prob_one_pass_fixed_round(g: DecisionFunction, xs, m: int) -> np.ndarray:
    xs = _nonempty(xs)
    return _unique_transmitter_mass(np.asarray(g(xs.normalized, m)))


def multipass_nonterminating(g: DecisionFunction, n: int, xs: Optional[Placement] = None) -> bool:
    """Analytic check that Algorithm-2 contention never ends.

    With a fixed placement the success mass of the stationary rounds is
    computed exactly; for random placements only constant tails are decided.
    """
    tail = g.later if isinstance(g, Hybrid) else g
    if isinstance(g, Hybrid) and xs is not None and success_mass(g.first_round, xs) == 1.0:
        return False
    if xs is not None and tail.round_independent:
        return success_mass(tail, xs) == 0.0
    if _is_constant(tail):
        p = _constant_value(tail)
        return p == 0.0 or (p == 1.0 and n >= 2)
    return False
