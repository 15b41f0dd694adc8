"""
What global knowledge would cost
================================

The ideal variants plan with exact, current energies of every node. Keeping
every node informed would take n*(n-1) messages per round; e3D instead
sends a status packet only when a node's battery drops past another tenth of
its capacity or when it was heavily loaded in the last round.
"""

from wsnsim import SimConfig, overhead_stats, run_simulation

for protocol in ("e3d", "ideal_diffusion", "random_clustering", "ideal_clustering"):
    result = run_simulation(SimConfig(protocol=protocol, seed=1))
    oh = overhead_stats(result.reports)
    print(f"{protocol:<18} data={oh.total_data_msgs:>7} ctrl={oh.total_ctrl_msgs:>6} "
          f"ctrl/node/round={oh.ctrl_per_node_round:.3f} "
          f"ctrl energy={oh.ctrl_energy_fraction:.2%} "
          f"hypothetical sync={oh.total_hypothetical_sync_msgs}")

# %%
# Residual energy spread over time for e3D. In the very first round every
# sender picks the same geometrically best relays, since no status packets
# exist yet; busy beacons and decile reports then pull the spread back in.
result = run_simulation(SimConfig(protocol="e3d", seed=1))
for r in result.reports[::20]:
    print(f"round {r.round:>4}: alive {r.alive_before:>3}  residual min {r.residual_min_j:.3f} "
          f"max {r.residual_max_j:.3f} sd {r.residual_stddev_j:.4f}")
