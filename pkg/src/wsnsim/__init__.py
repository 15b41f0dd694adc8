"""Round-based energy-aware routing simulator for wireless sensor networks.

Implements e3D diffusion routing alongside direct transmission, random
clustering and two global-knowledge variants (ideal diffusion, ideal
clustering) under a first-order radio energy model.
"""

from .config import PROTOCOLS, ConfigError, SimConfig, load_config, parse_config, render_config
from .energy import Battery, RadioModel, drain, rx_cost, tx_cost
from .engine import (RoundReport, SimState, SimulationResult, initial_state, make_plan,
                     run_round, run_simulation)
from .metrics import (DistributionStats, LifetimeStats, OverheadStats, distribution_stats,
                      lifetime_stats, overhead_stats, run_summary)
from .protocols import BASE, ProtocolKind, RoutingPlan
from .report import write_round_csv, write_summary_csv
from .topology import Position, Topology, candidate_next_hops, distance, generate_topology

__version__ = "0.1.0"
