"""Shared domain types: placements, decision functions, slot outcomes.

Decision functions map a normalized distance estimate ``x`` (0 at the sender,
1 at nominal range) and a contention round ``m`` to a transmit probability.
Every family accepts scalars or numpy arrays for ``x``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class Placement:
    """Node positions on a line ``[0, line_length]``, sender at the origin."""

    positions: tuple[float, ...]
    line_length: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(float(p) for p in self.positions))
        if not self.line_length > 0:
            raise ValueError(f"line_length must be positive, got {self.line_length}")
        for p in self.positions:
            if not 0.0 <= p <= self.line_length:
                raise ValueError(f"position {p} outside [0, {self.line_length}]")

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.positions, dtype=float)

    @property
    def normalized(self) -> np.ndarray:
        return self.array / self.line_length


def as_placement(xs: Union[Placement, Sequence[float]]) -> Placement:
    if isinstance(xs, Placement):
        return xs
    return Placement(tuple(xs), 1.0)


class DecisionFunction:
    """Base class for ``g^m(x)``.

    Subclasses implement :meth:`_raw`; :meth:`__call__` clamps ``x`` and the
    result into ``[0, 1]``.
    """

    #: True when the probability never depends on the round index.
    round_independent = True

    def _raw(self, x: np.ndarray, m: int) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x: ArrayLike, m: int = 0) -> ArrayLike:
        if m < 0:
            raise ValueError(f"round index must be >= 0, got {m}")
        scalar = np.ndim(x) == 0
        xc = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        out = np.clip(np.broadcast_to(np.asarray(self._raw(xc, m), dtype=float), xc.shape), 0.0, 1.0)
        return float(out) if scalar else out

    def label(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class Constant(DecisionFunction):
    """``g(x) = p`` regardless of distance: classic uniform leader election."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Constant probability must lie in [0, 1], got {self.p}")

    def _raw(self, x, m):
        return np.full_like(x, self.p)

    def label(self):
        return f"constant:{self.p:g}"


@dataclass(frozen=True)
class PowerLaw(DecisionFunction):
    """``g(x) = x**exponent``.

    ``exponent = 0`` is the constant 1: every in-range node transmits, so any
    slot with two or more contenders collides.
    """

    exponent: float

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError(f"PowerLaw exponent must be >= 0, got {self.exponent}")

    def _raw(self, x, m):
        return np.power(x, self.exponent)

    def label(self):
        return f"power:{self.exponent:g}"


@dataclass(frozen=True)
class LinearScaled(DecisionFunction):
    """``g(x) = x / divisor``."""

    divisor: float

    def __post_init__(self):
        if not self.divisor > 0:
            raise ValueError(f"LinearScaled divisor must be positive, got {self.divisor}")

    def _raw(self, x, m):
        return x / self.divisor

    def label(self):
        return f"linear:{self.divisor:g}"


@dataclass(frozen=True)
class Hybrid(DecisionFunction):
    """``first_round`` at ``m = 0``, ``later`` for every round after."""

    first_round: DecisionFunction
    later: DecisionFunction
    round_independent = False

    def _raw(self, x, m):
        g = self.first_round if m == 0 else self.later
        return g(x, m)

    def label(self):
        return f"hybrid({self.first_round.label()};{self.later.label()})"


@dataclass(frozen=True)
class Custom(DecisionFunction):
    """Wraps ``fn(x, m)``; ``fn`` must accept numpy arrays for ``x``."""

    fn: Callable[[np.ndarray, int], ArrayLike]
    round_independent: bool = False
    name: str = field(default="custom", compare=False)

    def _raw(self, x, m):
        return self.fn(x, m)

    def label(self):
        return self.name


def eval_decision(g: DecisionFunction, m: int, x: ArrayLike) -> ArrayLike:
    """Transmit probability of a node at normalized distance ``x`` in round ``m``."""
    return g(x, m)


class Scenario(str, enum.Enum):
    UNIFORM = "uniform"
    UNFAVOURABLE = "unfavourable"
    FAVOURABLE = "favourable"


def scenario_positions(kind: Union[Scenario, str], n: int) -> Placement:
    """Deterministic placements on ``[0, 1]`` used to compare decision functions.

    ``uniform`` spreads nodes evenly at ``i/(n+1)``; ``unfavourable`` packs all
    but the last node next to the sender; ``favourable`` packs all but the
    first node near the range boundary.
    """
    kind = Scenario(kind)
    if n < 1:
        raise ValueError(f"scenario needs n >= 1 nodes, got {n}")
    near, far = 1.0 / (n + 1), n / (n + 1)
    if kind is Scenario.UNIFORM:
        xs = [i / (n + 1) for i in range(1, n + 1)]
    elif kind is Scenario.UNFAVOURABLE:
        xs = [near] * (n - 1) + [far]
    else:
        xs = [near] + [far] * (n - 1)
    return Placement(tuple(xs), 1.0)


@dataclass(frozen=True)
class Silence:
    pass


@dataclass(frozen=True)
class Collision:
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"a collision needs at least 2 transmitters, got {self.count}")


@dataclass(frozen=True)
class Winner:
    index: int


SlotOutcome = Union[Silence, Collision, Winner]


@dataclass(frozen=True)
class HopResult:
    outcome: SlotOutcome
    progress: float
    rounds_used: int
    truncated: bool = False

    @property
    def succeeded(self) -> bool:
        return isinstance(self.outcome, Winner)


def decision_family(spec: str, n: float) -> DecisionFunction:
    """Build ``g`` from a family name, tied to node count (or density) ``n``.

    ``uniform`` = 1/n, ``power`` = x^(n-1), ``power-n`` = x^n, ``linear`` = x/n,
    ``hybrid`` = x^(n-1) in round 0 then 1/n.  ``constant:P``, ``power:K``,
    ``linear:D`` and ``hybrid:P`` take explicit parameters.  Densities below
    one clamp the exponent at 0 and the probability at 1.
    """
    name, _, arg = spec.partition(":")
    try:
        value = float(arg) if arg else None
    except ValueError:
        raise ValueError(f"bad parameter in decision family {spec!r}") from None
    if n <= 0:
        raise ValueError(f"decision family needs n > 0, got {n}")
    uniform_p = min(1.0, 1.0 / n)
    power_k = max(0.0, n - 1.0)
    if name == "constant" and value is not None:
        return Constant(value)
    if name == "uniform" and value is None:
        return Constant(uniform_p)
    if name == "power":
        return PowerLaw(power_k if value is None else value)
    if name == "power-n" and value is None:
        return PowerLaw(float(n))
    if name == "linear":
        return LinearScaled(float(n) if value is None else value)
    if name == "hybrid":
        return Hybrid(PowerLaw(power_k), Constant(uniform_p if value is None else value))
    raise ValueError(f"unknown decision family {spec!r}")
