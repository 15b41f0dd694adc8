"""
Lifetime and balance across protocols
=====================================

Runs every protocol on the same layouts and compares when the first node
dies, when half the network is gone, and how spread out the death rounds
are. A tight spread means the batteries can be swapped all at once.
"""

import statistics

from wsnsim import PROTOCOLS, SimConfig, run_simulation, run_summary

SEEDS = range(1, 6)

rows = []
for protocol in PROTOCOLS:
    for seed in SEEDS:
        rows.append(run_summary(run_simulation(SimConfig(protocol=protocol, seed=seed))))

# %%
print(f"{'protocol':<18} {'first':>6} {'50%':>6} {'last':>6} {'death sd':>9} {'capacity':>9}")
for protocol in PROTOCOLS:
    mine = [r for r in rows if r["protocol"] == protocol]

    def med(key):
        return statistics.median(r[key] for r in mine)

    print(f"{protocol:<18} {med('first_death_round'):>6.0f} {med('rounds_to_50pct_dead'):>6.0f} "
          f"{med('last_death_round'):>6.0f} {med('death_round_stddev'):>9.1f} "
          f"{med('usable_capacity'):>9.3f}")

# %%
# Clustering with aggregation delivers only a handful of long-haul packets
# per round, so its absolute lifetime is much longer at this scale; the
# comparison of interest among the diffusion schemes is e3D against direct
# transmission and against its global-knowledge counterpart.
