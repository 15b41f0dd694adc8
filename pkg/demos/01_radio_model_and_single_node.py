"""
Radio costs and a one-node network
==================================

The first-order radio model charges a fixed electronics cost per bit plus an
amplifier cost that grows with the square of the distance. A lone node
sending straight to the sink dies after a number of rounds we can write down
in closed form.
"""

import math

from wsnsim import RadioModel, SimConfig, run_simulation, rx_cost, tx_cost
from wsnsim.topology import Topology

radio = RadioModel()
for d in (0, 25, 50, 100, 150, 200):
    print(f"tx 2000 bits over {d:>3} m: {tx_cost(radio, 2000, d):.3e} J")
print(f"rx 2000 bits:               {rx_cost(radio, 2000):.3e} J")

# %%
# One node at (50, 50) with the sink at (50, 200): 150 m every round.
cfg = SimConfig(node_count=1, protocol="direct")
topo = Topology.from_config([(50, 50)], cfg)
per_round = tx_cost(RadioModel.from_config(cfg), cfg.data_packet_bits, 150)
result = run_simulation(cfg, topology=topo)
print("predicted death round:", math.floor(cfg.initial_energy_j / per_round))
print("simulated death round:", result.death_rounds[0])

# %%
# Relaying is not free: one hop halfway costs two electronics terms but
# only half the squared distance twice.
print("direct 150 m     :", tx_cost(radio, 2000, 150))
print("two hops of 75 m :", 2 * tx_cost(radio, 2000, 75) + rx_cost(radio, 2000))
