"""Static node layout, base station placement and inter-node geometry."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .config import ConfigError, SimConfig

# Stream tags for SeedSequence spawning; keep placement and head election independent.
PLACEMENT_STREAM = 0
CLUSTERING_STREAM = 1


class Position(NamedTuple):
    x: float
    y: float


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


class Topology:
    """Immutable node layout.

    Pairwise distances and distances to the base station are computed once
    so protocols and the engine can look them up in O(1).
    """

    def __init__(self, positions, base_station, field_width, field_height, comm_radius):
        pos = np.array(positions, dtype=float).reshape(-1, 2)
        if len(pos) < 1:
            raise ValueError("topology needs at least one node")
        if comm_radius <= 0:
            raise ValueError("comm_radius must be positive")
        if field_width <= 0 or field_height <= 0:
            raise ValueError("field dimensions must be positive")
        if (pos < 0).any() or (pos[:, 0] > field_width).any() or (pos[:, 1] > field_height).any():
            raise ValueError("node positions must lie inside the field")
        pos.setflags(write=False)
        self.positions = pos
        self.base_station = Position(float(base_station[0]), float(base_station[1]))
        self.field_width = float(field_width)
        self.field_height = float(field_height)
        self.comm_radius = float(comm_radius)

        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        dist.setflags(write=False)
        self.dist = dist
        to_bs = np.hypot(pos[:, 0] - self.base_station.x, pos[:, 1] - self.base_station.y)
        to_bs.setflags(write=False)
        self.dist_to_bs = to_bs
        in_range = dist <= self.comm_radius
        np.fill_diagonal(in_range, False)
        # ascending id order per node
        self.neighbors = tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in in_range)

    @property
    def node_count(self) -> int:
        return len(self.positions)

    def position(self, n: int) -> Position:
        x, y = self.positions[n]
        return Position(float(x), float(y))

    @property
    def nodes(self) -> list[tuple[int, Position]]:
        return [(i, self.position(i)) for i in range(self.node_count)]

    @classmethod
    def from_config(cls, positions, config: SimConfig) -> "Topology":
        return cls(positions, (config.bs_x_m, config.bs_y_m), config.field_width_m,
                   config.field_height_m, config.comm_radius_m)

    def __repr__(self):
        return (f"Topology(n={self.node_count}, field={self.field_width:g}x{self.field_height:g}, "
                f"bs=({self.base_station.x:g}, {self.base_station.y:g}), r={self.comm_radius:g})")


def generate_topology(config: SimConfig, seed: int | None = None) -> Topology:
    """Place ``config.node_count`` nodes i.i.d. uniformly over the field.

    ``seed`` defaults to ``config.seed``. The same (config, seed) pair always
    yields the same layout.
    """
    if config.node_count < 1:
        raise ConfigError("must be >= 1", key="node_count")
    if config.field_width_m <= 0 or config.field_height_m <= 0:
        raise ConfigError("field dimensions must be positive", key="field_width_m")
    seed = config.seed if seed is None else seed
    rng = np.random.default_rng([seed, PLACEMENT_STREAM])
    xy = rng.random((config.node_count, 2)) * [config.field_width_m, config.field_height_m]
    return Topology.from_config(xy, config)


def candidate_next_hops(n: int, topo: Topology, alive) -> list[int]:
    """Alive neighbors of ``n`` (within comm radius) strictly closer to the base station.

    ``alive`` is indexable by node id. Result is in ascending id order; an empty
    list means the node should send straight to the base station.
    """
    own = topo.dist_to_bs[n]
    return [c for c in topo.neighbors[n] if alive[c] and topo.dist_to_bs[c] < own]
