"""Routing policies.

Each ``plan_*`` function turns the committed state of the previous round into
a :class:`RoutingPlan` for the next one: where every alive node sends its
packets, which nodes act as cluster heads, and which control packets go out
before data starts flowing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .topology import CLUSTERING_STREAM, Topology, candidate_next_hops

BASE = -1


class ProtocolKind(str, enum.Enum):
    DIRECT = "direct"
    E3D = "e3d"
    IDEAL_DIFFUSION = "ideal_diffusion"
    RANDOM_CLUSTERING = "random_clustering"
    IDEAL_CLUSTERING = "ideal_clustering"

    @property
    def is_diffusion(self):
        return self in (ProtocolKind.E3D, ProtocolKind.IDEAL_DIFFUSION)

    @property
    def is_clustering(self):
        return self in (ProtocolKind.RANDOM_CLUSTERING, ProtocolKind.IDEAL_CLUSTERING)

    @property
    def is_ideal(self):
        return self in (ProtocolKind.IDEAL_DIFFUSION, ProtocolKind.IDEAL_CLUSTERING)


@dataclass
class NeighborEntry:
    """What a node believes about one neighbor, as of its last status broadcast."""
    id: int
    position: tuple
    last_known_residual: float
    busy: bool = False
    last_broadcast_round: int = 0


@dataclass(frozen=True)
class ControlMsg:
    """One control transmission. Broadcasts list every receiver; joins list one."""
    sender: int
    receivers: tuple
    bits: int
    kind: str = "status"


@dataclass
class RoutingPlan:
    next_hop: dict = field(default_factory=dict)
    cluster_heads: frozenset = frozenset()
    control_msgs: list = field(default_factory=list)
    hypothetical_sync_count: int = 0


@dataclass(frozen=True)
class ScoreParams:
    w_e: float = 0.4
    w_l: float = 0.2
    w_d: float = 0.4
    load_max: int = 5

    @classmethod
    def from_config(cls, cfg):
        w_e, w_l, w_d = cfg.weights
        return cls(w_e, w_l, w_d, cfg.load_max)


def _alive_ids(alive):
    return [i for i, a in enumerate(alive) if a]


def plan_direct(alive) -> RoutingPlan:
    return RoutingPlan(next_hop={n: BASE for n in _alive_ids(alive)})


def geometry_ratio(n, c, topo: Topology) -> float:
    """Relay energy proxy: (d(n,c)^2 + d(c,BS)^2) / d(n,BS)^2."""
    d_nc = topo.dist[n, c]
    d_cb = topo.dist_to_bs[c]
    d_nb = topo.dist_to_bs[n]
    return (d_nc * d_nc + d_cb * d_cb) / (d_nb * d_nb)


def e3d_score(n: int, c: NeighborEntry, topo: Topology, weights: ScoreParams,
              initial_energy: float, load: float | None = None) -> float:
    """Cost of relaying n's traffic through neighbor ``c``; lower is better.

    ``load`` overrides the busy-flag penalty with a value in [0, 1]; the ideal
    variant passes its exact load fraction here.
    """
    if load is None:
        load = 1.0 if c.busy else 0.0
    energy_term = 1.0 - c.last_known_residual / initial_energy
    return (weights.w_e * energy_term + weights.w_l * load
            + weights.w_d * geometry_ratio(n, c.id, topo))


def base_score(weights: ScoreParams) -> float:
    """Score of sending straight to the sink: geometry ratio 1, mains powered, never busy."""
    return weights.w_d


def _argmin(scored, base_score=math.inf):
    best, best_score = BASE, base_score
    for cand, score in scored:  # ascending id order, strict < keeps the lowest id on ties
        if score < best_score:
            best, best_score = cand, score
    return best


def initial_neighbor_tables(topo: Topology, initial_energy: float) -> list[dict]:
    tables = []
    for n in range(topo.node_count):
        tables.append({c: NeighborEntry(c, topo.position(c), initial_energy)
                       for c in topo.neighbors[n]})
    return tables


def plan_e3d(alive, tables, topo: Topology, params: ScoreParams, initial_energy: float,
             pending_broadcasts=(), ctrl_bits: int = 64) -> RoutingPlan:
    """Greedy next-hop choice from each node's (possibly stale) neighbor table.

    ``pending_broadcasts`` are status packets triggered at the end of the
    previous round; their content is already reflected in ``tables`` and they
    are listed here so the engine can charge them.
    """
    plan = RoutingPlan()
    for n in _alive_ids(alive):
        table = tables[n]
        cands = candidate_next_hops(n, topo, alive)
        plan.next_hop[n] = _argmin(
            ((c, e3d_score(n, table[c], topo, params, initial_energy)) for c in cands),
            base_score(params))
    for s in pending_broadcasts:
        if alive[s]:
            receivers = tuple(c for c in topo.neighbors[s] if alive[c])
            plan.control_msgs.append(ControlMsg(s, receivers, ctrl_bits, "status"))
    return plan


def decile(residual: float, initial_energy: float) -> int:
    """Number of 10%-of-initial marks at or above the residual: 10 when full, 9 below 90%."""
    return int(math.ceil(10.0 * residual / initial_energy))


def status_triggers(alive, residual, announced, relays, initial_energy: float,
                    load_max: int) -> list[int]:
    """Nodes that must send a status packet before the next round.

    A node reports when its residual has dropped into a lower decile of the
    initial energy than the one it last announced, or when it relayed at
    least ``load_max`` packets this round (busy beacon). Both reasons share
    one packet.
    """
    out = []
    for n, a in enumerate(alive):
        if not a:
            continue
        if (decile(residual[n], initial_energy) < decile(announced[n], initial_energy)
                or relays[n] >= load_max):
            out.append(n)
    return out


def apply_status(tables, topo: Topology, senders, residual, relays, load_max: int,
                 round_index: int) -> None:
    """Refresh neighbor tables with this round's status packets.

    Busy flags last exactly one round, so every flag is cleared before the
    new beacons are applied.
    """
    for table in tables:
        for entry in table.values():
            entry.busy = False
    for s in senders:
        for m in topo.neighbors[s]:
            entry = tables[m][s]
            entry.last_known_residual = residual[s]
            entry.busy = relays[s] >= load_max
            entry.last_broadcast_round = round_index


def plan_ideal_diffusion(alive, residual, prev_relays, topo: Topology, params: ScoreParams,
                         initial_energy: float) -> RoutingPlan:
    """Same greedy rule as e3D with exact residuals and last-round relay loads."""
    plan = RoutingPlan()
    ids = _alive_ids(alive)
    for n in ids:
        scored = []
        for c in candidate_next_hops(n, topo, alive):
            entry = NeighborEntry(c, topo.position(c), residual[c])
            load = min(prev_relays[c] / params.load_max, 1.0)
            scored.append((c, e3d_score(n, entry, topo, params, initial_energy, load=load)))
        plan.next_hop[n] = _argmin(scored, base_score(params))
    plan.hypothetical_sync_count = len(ids) * (len(ids) - 1)
    return plan


def _nearest_head(n, heads, topo):
    return min(heads, key=lambda h: (topo.dist[n, h], h))


def _cluster_plan(ids, heads, topo):
    plan = RoutingPlan(cluster_heads=frozenset(heads))
    for n in ids:
        plan.next_hop[n] = BASE if n in plan.cluster_heads else _nearest_head(n, heads, topo)
    return plan


def election_draws(seed: int, round_index: int, node_count: int) -> np.ndarray:
    """Per-node uniforms for head self-election, a pure function of (seed, round)."""
    rng = np.random.default_rng([seed, CLUSTERING_STREAM, round_index])
    return rng.random(node_count)


def plan_random_clustering(alive, topo: Topology, p_head: float, seed: int,
                           round_index: int, ctrl_bits: int = 64) -> RoutingPlan:
    """Every alive node becomes a head with probability ``p_head``; others join the nearest head.

    Heads advertise with a local broadcast; members answer with a unicast join.
    With no head elected, everyone sends straight to the base station.
    """
    if not 0.0 <= p_head <= 1.0:
        raise ValueError(f"p_head must lie in [0, 1], got {p_head!r}")
    ids = _alive_ids(alive)
    draws = election_draws(seed, round_index, topo.node_count)
    heads = [n for n in ids if draws[n] < p_head]
    if not heads:
        return RoutingPlan(next_hop={n: BASE for n in ids})
    plan = _cluster_plan(ids, heads, topo)
    for h in heads:
        receivers = tuple(c for c in topo.neighbors[h] if alive[c])
        plan.control_msgs.append(ControlMsg(h, receivers, ctrl_bits, "advert"))
    for n in ids:
        if plan.next_hop[n] != BASE:
            plan.control_msgs.append(ControlMsg(n, (plan.next_hop[n],), ctrl_bits, "join"))
    return plan


def ideal_head_count(p_head: float, alive_count: int) -> int:
    return max(1, int(math.floor(p_head * alive_count + 0.5)))


def plan_ideal_clustering(alive, residual, topo: Topology, p_head: float) -> RoutingPlan:
    """Heads are the k alive nodes with the most residual energy (ties to lower id)."""
    ids = _alive_ids(alive)
    if not ids:
        raise ValueError("ideal clustering needs at least one alive node")
    k = ideal_head_count(p_head, len(ids))
    heads = sorted(ids, key=lambda n: (-residual[n], n))[:k]
    plan = _cluster_plan(ids, sorted(heads), topo)
    plan.hypothetical_sync_count = len(ids) * (len(ids) - 1)
    return plan
