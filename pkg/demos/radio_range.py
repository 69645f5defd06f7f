"""
From link budget to range
=========================

The indoor log-distance model maps a path-loss budget to a range.  A node
that hears a packet guesses its distance assuming the sender used nominal
power; a sender that is a little louder than advertised makes receivers
underestimate how far away they are.
"""

import numpy as np

from longhop import radio

cfg = radio.RadioConfig.indoor(range_m=130.0, tx_power_dbm=-5.0, power_jitter_fraction=0.1)
print("budget", round(cfg.link_budget_db, 3), "dB -> range", round(cfg.nominal_range_m, 6), "m")
print("power bounds under 10% jitter (dBm):", [round(v, 3) for v in radio.jitter_bounds_dbm(cfg)])

rng = np.random.default_rng(3)
for d in (10.0, 65.0, 128.0):
    tx = radio.perturb_tx_power(cfg, rng)
    rx = radio.received_power_dbm(cfg, d, tx)
    est = radio.estimate_distance_dbm(cfg, rx)
    heard = rx >= cfg.sensitivity_dbm
    print(f"true {d:6.1f} m  tx {tx:+.3f} dBm  estimate {est:7.2f} m  heard={heard}")
