"""
Relaying along a line
=====================

Nodes are scattered on a long line, a message starts at the first one and
each hop is decided by one-pass contention with ``g = x**(n-1)``, where n is
the density estimate ``N / d * r``.  The mean normalized hop length climbs
with density and levels off just under one.
"""

from longhop.experiment import ExperimentSpec, run_experiment

spec = ExperimentSpec(N_values=(20, 200), d_values=(200, 1000, 2500, 7500), m_values=(0,), trials=200)
rows = sorted(run_experiment(spec), key=lambda r: r["density_n"])
for r in rows:
    print(f"density {r['density_n']:7.2f}  mean {r['mean_norm_dist']:.3f}  sd {r['std_dev']:.3f}  "
          f"hops {r['hop_count']}")

###############################################################################
# The same sweep from the shell, as CSV:
#
#     longhop experiment --N 20,200 --d 200,1000,2500,7500 --m 0 --trials 200
