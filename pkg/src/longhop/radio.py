"""Log-distance path loss, distance estimation from received power, and link budget.

Link-budget arithmetic is done in dB; ``mW = 10 ** (dBm / 10)``.  The
linear helpers (:func:`received_power`, :func:`estimate_distance`) take and
return milliwatts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

INDOOR_INTERCEPT_DB = 15.3
INDOOR_SLOPE_DB = 37.6


def dbm_to_mw(dbm):
    return np.power(10.0, np.asarray(dbm, dtype=float) / 10.0)


def mw_to_dbm(mw):
    return 10.0 * np.log10(mw)


@dataclass(frozen=True)
class RadioConfig:
    """Path-loss parameters plus the transmitter/receiver link budget.

    ``p0_dbm`` is the power received at ``d0_m`` from a sender emitting the
    nominal ``tx_power_dbm``.  ``power_jitter_fraction`` is the half-width of
    the uniform multiplicative perturbation of the linear transmit power.
    """

    p0_dbm: float = 0.0
    d0_m: float = 1.0
    alpha: float = 2.0
    tx_power_dbm: float = -5.0
    sensitivity_dbm: float = -100.0
    power_jitter_fraction: float = 0.0
    noise_std_db: float = 0.0

    def __post_init__(self):
        if not self.d0_m > 0:
            raise ValueError("d0_m must be positive")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not 0.0 <= self.power_jitter_fraction < 1.0:
            raise ValueError("power_jitter_fraction must lie in [0, 1)")
        if self.noise_std_db < 0:
            raise ValueError("noise_std_db must be >= 0")

    @property
    def link_budget_db(self) -> float:
        return self.tx_power_dbm - self.sensitivity_dbm

    @property
    def nominal_range_m(self) -> float:
        """Distance at which a nominal-power sender drops to the receiver sensitivity."""
        return distance_for_power_dbm(self, self.sensitivity_dbm)

    @classmethod
    def indoor(cls, range_m: float = 130.0, tx_power_dbm: float = -5.0,
               power_jitter_fraction: float = 0.1, **kw) -> "RadioConfig":
        """Indoor microcell model (15.3 dB at 1 m, 37.6 dB/decade) with the
        receiver sensitivity chosen so the nominal range is ``range_m``."""
        return cls(p0_dbm=tx_power_dbm - INDOOR_INTERCEPT_DB, d0_m=1.0,
                   alpha=INDOOR_SLOPE_DB / 10.0, tx_power_dbm=tx_power_dbm,
                   sensitivity_dbm=tx_power_dbm - indoor_path_loss_db(range_m),
                   power_jitter_fraction=power_jitter_fraction, **kw)

    def with_tx_power(self, tx_power_dbm: float) -> "RadioConfig":
        """Shift the nominal transmit power, keeping the path-loss curve's shape."""
        shift = tx_power_dbm - self.tx_power_dbm
        return replace(self, tx_power_dbm=tx_power_dbm, p0_dbm=self.p0_dbm + shift)


def _positive(name, value):
    if np.any(np.asarray(value) <= 0):
        raise ValueError(f"{name} must be positive")


def received_power_dbm(cfg: RadioConfig, d, tx_power_dbm=None):
    """``p0 + 10 * alpha * log10(d0 / d)``, shifted by the sender's deviation from nominal power."""
    _positive("distance", d)
    p = cfg.p0_dbm + 10.0 * cfg.alpha * np.log10(cfg.d0_m / np.asarray(d, dtype=float))
    if tx_power_dbm is not None:
        p = p + (np.asarray(tx_power_dbm) - cfg.tx_power_dbm)
    return float(p) if np.ndim(p) == 0 else p


def received_power(cfg: RadioConfig, d):
    """Linear (mW) received power ``P0 * (d0 / d) ** alpha``."""
    _positive("distance", d)
    p = float(dbm_to_mw(cfg.p0_dbm)) * np.power(cfg.d0_m / np.asarray(d, dtype=float), cfg.alpha)
    return float(p) if np.ndim(p) == 0 else p


def estimate_distance(cfg: RadioConfig, p_received_mw):
    """Invert :func:`received_power` assuming the sender used nominal power."""
    _positive("received power", p_received_mw)
    d = cfg.d0_m * np.power(float(dbm_to_mw(cfg.p0_dbm)) / np.asarray(p_received_mw, dtype=float),
                            1.0 / cfg.alpha)
    return float(d) if np.ndim(d) == 0 else d


def distance_for_power_dbm(cfg: RadioConfig, p_received_dbm):
    """Invert :func:`received_power_dbm` (nominal sender power)."""
    d = cfg.d0_m * np.power(10.0, (cfg.p0_dbm - np.asarray(p_received_dbm, dtype=float))
                            / (10.0 * cfg.alpha))
    return float(d) if np.ndim(d) == 0 else d


def estimate_distance_dbm(cfg: RadioConfig, p_received_dbm, rng=None):
    """Distance estimate from a dBm reading; adds Gaussian measurement noise
    of ``cfg.noise_std_db`` when an ``rng`` is supplied."""
    p = np.asarray(p_received_dbm, dtype=float)
    if rng is not None and cfg.noise_std_db > 0:
        p = p + rng.normal(0.0, cfg.noise_std_db, p.shape)
    return distance_for_power_dbm(cfg, p)


def indoor_path_loss_db(d):
    _positive("distance", d)
    loss = INDOOR_INTERCEPT_DB + INDOOR_SLOPE_DB * np.log10(np.asarray(d, dtype=float))
    return float(loss) if np.ndim(loss) == 0 else loss


def max_range(l_max_db):
    """Range at which the indoor path loss uses up the link budget ``l_max_db``."""
    r = np.power(10.0, (np.asarray(l_max_db, dtype=float) - INDOOR_INTERCEPT_DB) / INDOOR_SLOPE_DB)
    return float(r) if np.ndim(r) == 0 else r


def perturb_tx_power(cfg: RadioConfig, rng: np.random.Generator, size=None):
    """Transmit power in dBm after a uniform ``[1 - j, 1 + j]`` factor on the linear scale."""
    j = cfg.power_jitter_fraction
    if j == 0.0:
        return cfg.tx_power_dbm if size is None else np.full(size, cfg.tx_power_dbm)
    factor = rng.uniform(1.0 - j, 1.0 + j, size)
    out = cfg.tx_power_dbm + 10.0 * np.log10(factor)
    return float(out) if size is None else out


def jitter_bounds_dbm(cfg: RadioConfig) -> tuple[float, float]:
    j = cfg.power_jitter_fraction
    return (cfg.tx_power_dbm + 10.0 * math.log10(1.0 - j),
            cfg.tx_power_dbm + 10.0 * math.log10(1.0 + j))
