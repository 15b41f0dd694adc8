"""Lifetime, dissipation-balance and overhead summaries of a run."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class LifetimeStats:
    first_death_round: int
    rounds_to_10pct_dead: int
    rounds_to_50pct_dead: int
    last_death_round: int
    usable_capacity: float
    first_censored: bool = False
    pct10_censored: bool = False
    pct50_censored: bool = False
    last_censored: bool = False


@dataclass(frozen=True)
class DistributionStats:
    mean: float
    stddev: float
    min: float
    max: float
    cv: float


@dataclass(frozen=True)
class OverheadStats:
    total_ctrl_msgs: int
    total_data_msgs: int
    ctrl_per_node_round: float
    ctrl_energy_fraction: float
    total_hypothetical_sync_msgs: int


def _milestone(ordered, fraction, node_count, max_rounds):
    # round by which at least ceil(fraction * N) nodes are dead
    k = max(1, math.ceil(fraction * node_count - 1e-12))
    if k <= len(ordered):
        return ordered[k - 1], False
    return max_rounds, True


def lifetime_stats(death_rounds: Sequence, max_rounds: int, alive_series: Sequence[int] = ()
                   ) -> LifetimeStats:
    """Death milestones over the node population.

    ``death_rounds`` has one entry per node, None for nodes that outlived the
    horizon; milestones those survivors would decide are reported at
    ``max_rounds`` and flagged as censored. ``alive_series`` is the alive count
    at the start of each round, used for the usable-capacity average up to and
    including the last death round.
    """
    node_count = len(death_rounds)
    if node_count == 0:
        raise ValueError("need at least one node")
    ordered = sorted(r for r in death_rounds if r is not None)
    first, c0 = _milestone(ordered, 1.0 / node_count, node_count, max_rounds)
    p10, c10 = _milestone(ordered, 0.1, node_count, max_rounds)
    p50, c50 = _milestone(ordered, 0.5, node_count, max_rounds)
    last, c100 = _milestone(ordered, 1.0, node_count, max_rounds)

    window = list(alive_series)
    if not c100:
        window = window[:last + 1]
    capacity = (sum(window) / (len(window) * node_count)) if window else math.nan
    return LifetimeStats(first, p10, p50, last, capacity, c0, c10, c50, c100)


def distribution_stats(values: Sequence[float]) -> DistributionStats:
    """Population statistics (divide by N)."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("distribution_stats needs a non-empty list")
    n = len(vals)
    mean = math.fsum(vals) / n
    if all(v == vals[0] for v in vals):
        mean, std = vals[0], 0.0
    else:
        std = math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / n)
    cv = std / mean if mean != 0 else 0.0
    return DistributionStats(mean, std, min(vals), max(vals), cv)


def overhead_stats(reports) -> OverheadStats:
    ctrl = sum(r.ctrl_msgs for r in reports)
    data = sum(r.data_msgs for r in reports)
    node_rounds = sum(r.alive_before for r in reports)
    ctrl_energy = math.fsum(r.energy_ctrl_j for r in reports)
    total_energy = math.fsum(r.energy_tx_j + r.energy_rx_j + r.energy_ctrl_j for r in reports)
    sync = sum(r.hypothetical_sync_msgs for r in reports)
    return OverheadStats(
        total_ctrl_msgs=ctrl,
        total_data_msgs=data,
        ctrl_per_node_round=ctrl / node_rounds if node_rounds else 0.0,
        ctrl_energy_fraction=ctrl_energy / total_energy if total_energy > 0 else 0.0,
        total_hypothetical_sync_msgs=sync,
    )


def run_summary(result) -> dict:
    """Flat summary row for one simulation result."""
    cfg = result.config
    lt = lifetime_stats(result.death_rounds, cfg.max_rounds,
                        [r.alive_before for r in result.reports])
    censored = [cfg.max_rounds if d is None else d for d in result.death_rounds]
    deaths = distribution_stats(censored)
    residual = distribution_stats(result.final_residuals)
    oh = overhead_stats(result.reports)
    row = {"protocol": cfg.protocol, "seed": cfg.seed, "rounds_run": result.rounds_run}
    row.update(vars(lt))
    row.update({f"death_round_{k}": v for k, v in vars(deaths).items()})
    row.update({f"final_residual_{k}": v for k, v in vars(residual).items()})
    row.update(vars(oh))
    return row
