"""Round loop: plan, charge control traffic, forward data, record deaths."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import protocols as P
from .config import SimConfig
from .energy import Battery, RadioModel, drain, rx_cost, tx_cost
from .protocols import BASE, ProtocolKind, RoutingPlan
from .topology import Topology, generate_topology


class PlanError(AssertionError):
    """A protocol produced a plan that breaks totality or progress."""


@dataclass
class RoundReport:
    round: int
    alive_before: int
    alive_after: int
    packets_delivered: int
    packets_lost: int
    data_msgs: int
    ctrl_msgs: int
    hypothetical_sync_msgs: int
    energy_tx_j: float
    energy_rx_j: float
    energy_ctrl_j: float
    residual_mean_j: float
    residual_min_j: float
    residual_max_j: float
    residual_stddev_j: float
    deaths: tuple = ()

    @property
    def energy_total_j(self):
        return self.energy_tx_j + self.energy_rx_j + self.energy_ctrl_j


@dataclass
class SimState:
    config: SimConfig
    topology: Topology
    batteries: list
    round: int = 0
    neighbor_tables: list | None = None
    announced: list | None = None  # residual each node last reported (e3D)
    pending_status: list = field(default_factory=list)
    prev_relay_counts: list = field(default_factory=list)
    death_rounds: list = field(default_factory=list)
    last_max_hops: int = 0

    @property
    def alive(self) -> list[bool]:
        return [b.alive for b in self.batteries]

    @property
    def residual(self) -> list[float]:
        return [b.residual for b in self.batteries]

    @property
    def alive_count(self) -> int:
        return sum(b.alive for b in self.batteries)

    @property
    def protocol(self) -> ProtocolKind:
        return ProtocolKind(self.config.protocol)

    @property
    def radio(self) -> RadioModel:
        return RadioModel.from_config(self.config)


@dataclass
class SimulationResult:
    config: SimConfig
    reports: list
    death_rounds: list  # None for nodes still alive at the horizon
    final_residuals: list

    @property
    def rounds_run(self):
        return len(self.reports)


def initial_state(config: SimConfig, topology: Topology | None = None) -> SimState:
    topo = generate_topology(config) if topology is None else topology
    n = topo.node_count
    state = SimState(config=config, topology=topo,
                     batteries=[Battery(config.initial_energy_j) for _ in range(n)],
                     prev_relay_counts=[0] * n, death_rounds=[None] * n)
    if state.protocol is ProtocolKind.E3D:
        state.neighbor_tables = P.initial_neighbor_tables(topo, config.initial_energy_j)
        state.announced = [config.initial_energy_j] * n
    return state


def make_plan(state: SimState) -> RoutingPlan:
    cfg = state.config
    alive = state.alive
    kind = state.protocol
    if kind is ProtocolKind.DIRECT:
        return P.plan_direct(alive)
    if kind is ProtocolKind.E3D:
        return P.plan_e3d(alive, state.neighbor_tables, state.topology,
                          P.ScoreParams.from_config(cfg), cfg.initial_energy_j,
                          state.pending_status, cfg.ctrl_packet_bits)
    if kind is ProtocolKind.IDEAL_DIFFUSION:
        return P.plan_ideal_diffusion(alive, state.residual, state.prev_relay_counts,
                                      state.topology, P.ScoreParams.from_config(cfg),
                                      cfg.initial_energy_j)
    if kind is ProtocolKind.RANDOM_CLUSTERING:
        return P.plan_random_clustering(alive, state.topology, cfg.cluster_head_prob,
                                        cfg.seed, state.round, cfg.ctrl_packet_bits)
    return P.plan_ideal_clustering(alive, state.residual, state.topology, cfg.cluster_head_prob)


def check_plan(plan: RoutingPlan, state: SimState) -> None:
    alive = state.alive
    expected = {i for i, a in enumerate(alive) if a}
    if set(plan.next_hop) != expected:
        raise PlanError("plan does not cover exactly the alive nodes")
    topo = state.topology
    kind = state.protocol
    for n, t in plan.next_hop.items():
        if t == BASE:
            continue
        if not alive[t]:
            raise PlanError(f"node {n} routes to dead node {t}")
        if kind.is_clustering:
            if n in plan.cluster_heads or t not in plan.cluster_heads:
                raise PlanError(f"clustering plan routes {n} -> {t} outside member->head")
        elif not topo.dist_to_bs[t] < topo.dist_to_bs[n]:
            raise PlanError(f"next hop {n} -> {t} makes no progress toward the base station")


def processing_order(plan: RoutingPlan, topo: Topology) -> list[int]:
    """Farthest-from-sink first so relays hold their whole batch before sending; heads last."""
    return sorted(plan.next_hop,
                  key=lambda n: (n in plan.cluster_heads, -topo.dist_to_bs[n], n))


def _residual_stats(batteries):
    r = np.array([b.residual for b in batteries])
    return float(r.mean()), float(r.min()), float(r.max()), float(r.std())


def run_round(state: SimState, plan: RoutingPlan | None = None) -> RoundReport:
    """Advance ``state`` by one round in place and return its report."""
    cfg = state.config
    topo = state.topology
    radio = state.radio
    bats = state.batteries
    n_nodes = topo.node_count
    alive_before = state.alive_count
    if alive_before == 0:
        raise RuntimeError("run_round called with no alive nodes")
    if plan is None:
        plan = make_plan(state)
    check_plan(plan, state)

    spent_before = [dict(b.spent) for b in bats]
    deaths = []
    holding = {n: [0] for n in plan.next_hop}  # hop counts of packets held
    lost = 0
    delivered = 0
    data_msgs = 0
    relays = [0] * n_nodes
    max_hops = 0

    def kill(n):
        nonlocal lost
        bats[n].alive = False
        deaths.append(n)
        lost += len(holding.get(n, ()))
        holding[n] = []

    def spend(n, amount, category):
        ok = drain(bats[n], amount, category)
        if not bats[n].alive:
            kill(n)
        return ok

    # control phase: one transmission per message, sized for the farthest receiver
    ctrl_msgs = 0
    for msg in plan.control_msgs:
        s = msg.sender
        if not bats[s].alive:
            continue
        receivers = [r for r in msg.receivers if bats[r].alive]
        reach = max((float(topo.dist[s, r]) for r in receivers), default=0.0)
        if not spend(s, tx_cost(radio, msg.bits, reach), "ctrl"):
            continue
        ctrl_msgs += 1
        for r in receivers:
            if bats[r].alive:
                spend(r, rx_cost(radio, msg.bits), "ctrl")

    # data phase
    aggregate = cfg.aggregate and state.protocol.is_clustering
    for n in processing_order(plan, topo):
        if not bats[n].alive:
            continue
        target = plan.next_hop[n]
        d = float(topo.dist_to_bs[n] if target == BASE else topo.dist[n, target])
        batch = holding[n]
        if not batch:
            continue
        if aggregate and n in plan.cluster_heads:
            sends = [list(batch)]
        else:
            sends = [[h] for h in reversed(batch)]
        for packets in sends:
            ok = drain(bats[n], tx_cost(radio, cfg.data_packet_bits, d), "tx")
            if ok:
                del batch[len(batch) - len(packets):]
            if not bats[n].alive:
                kill(n)
            if not ok:
                break
            data_msgs += 1
            hops = max(packets) + 1
            max_hops = max(max_hops, hops)
            if hops > n_nodes:
                raise PlanError(f"packet exceeded {n_nodes} hops; forwarding loop")
            if target == BASE:
                delivered += len(packets)
            elif not bats[target].alive:
                lost += len(packets)
            elif spend(target, rx_cost(radio, cfg.data_packet_bits), "rx"):
                relays[target] += 1
                if bats[target].alive:
                    holding[target].append(hops)
                else:
                    lost += 1
            else:
                lost += 1
            if not bats[n].alive:
                break
    for n, held in holding.items():
        if held and bats[n].alive:
            raise PlanError(f"node {n} still holds packets at end of round")

    spent = {c: float(sum(b.spent[c] - s[c] for b, s in zip(bats, spent_before)))
             for c in ("tx", "rx", "ctrl")}
    for n in deaths:
        state.death_rounds[n] = state.round

    state.prev_relay_counts = relays
    state.last_max_hops = max_hops
    if state.protocol is ProtocolKind.E3D:
        alive = state.alive
        residual = state.residual
        senders = P.status_triggers(alive, residual, state.announced, relays,
                                    cfg.initial_energy_j, cfg.load_max)
        P.apply_status(state.neighbor_tables, topo, senders, residual, relays,
                       cfg.load_max, state.round)
        for s in senders:
            state.announced[s] = residual[s]
        state.pending_status = senders

    mean, lo, hi, sd = _residual_stats(bats)
    report = RoundReport(
        round=state.round, alive_before=alive_before, alive_after=state.alive_count,
        packets_delivered=delivered, packets_lost=lost, data_msgs=data_msgs,
        ctrl_msgs=ctrl_msgs, hypothetical_sync_msgs=plan.hypothetical_sync_count,
        energy_tx_j=spent["tx"], energy_rx_j=spent["rx"], energy_ctrl_j=spent["ctrl"],
        residual_mean_j=mean, residual_min_j=lo, residual_max_j=hi, residual_stddev_j=sd,
        deaths=tuple(sorted(deaths)))
    state.round += 1
    return report


def run_simulation(config: SimConfig, topology: Topology | None = None,
                   on_round=None) -> SimulationResult:
    """Run rounds until every node is dead or ``config.max_rounds`` is reached.

    ``on_round(state, plan, report)`` is called after each round, mainly for
    tracing in tests.
    """
    state = initial_state(config, topology)
    reports = []
    while state.round < config.max_rounds and state.alive_count > 0:
        plan = make_plan(state)
        report = run_round(state, plan)
        reports.append(report)
        if on_round is not None:
            on_round(state, plan, report)
    return SimulationResult(config, reports, list(state.death_rounds), state.residual)
