import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsnsim.config import ConfigError, SimConfig
from wsnsim.topology import Position, candidate_next_hops, distance, generate_topology

coords = st.floats(-1e4, 1e4, allow_nan=False)


def test_distance_examples():
    assert distance((0, 0), (3, 4)) == 5
    assert distance(Position(7, 7), Position(7, 7)) == 0


@given(coords, coords, coords, coords)
def test_distance_symmetric_and_zero_iff_equal(ax, ay, bx, by):
    a, b = (ax, ay), (bx, by)
    assert distance(a, b) == distance(b, a)
    assert (distance(a, b) == 0) == (a == b)


def test_single_node_inside_field():
    topo = generate_topology(SimConfig(node_count=1), seed=3)
    assert topo.node_count == 1
    x, y = topo.position(0)
    assert 0 <= x <= 100 and 0 <= y <= 100


def test_generation_is_deterministic():
    cfg = SimConfig()
    a = generate_topology(cfg, seed=42)
    b = generate_topology(cfg, seed=42)
    assert np.array_equal(a.positions, b.positions)
    assert not np.array_equal(a.positions, generate_topology(cfg, seed=43).positions)


def test_uniform_placement_mean():
    topo = generate_topology(SimConfig(node_count=1000), seed=7)
    xs = [p.x for _, p in topo.nodes]
    tolerance = 100 / math.sqrt(12) / math.sqrt(1000) * 4
    assert abs(sum(xs) / len(xs) - 50) <= tolerance


@pytest.mark.parametrize("seed", range(5))
def test_positions_respect_field(seed):
    cfg = SimConfig(field_width_m=40, field_height_m=250, node_count=300)
    pos = generate_topology(cfg, seed=seed).positions
    assert (pos >= 0).all() and (pos[:, 0] <= 40).all() and (pos[:, 1] <= 250).all()


def test_bad_dimensions_rejected():
    with pytest.raises(ConfigError):
        SimConfig(field_width_m=0)
    with pytest.raises(ConfigError):
        SimConfig(node_count=0)


def test_collinear_candidates(hand_topology):
    topo, _ = hand_topology([(0, 50), (40, 50), (80, 50)], bs=(100, 50), radius=50)
    alive = [True] * 3
    assert candidate_next_hops(0, topo, alive) == [1]
    assert candidate_next_hops(1, topo, alive) == [2]
    assert candidate_next_hops(2, topo, alive) == []


def test_dead_nodes_never_candidates(hand_topology):
    topo, _ = hand_topology([(0, 50), (40, 50), (30, 50)], bs=(100, 50), radius=50)
    assert candidate_next_hops(0, topo, [True, True, True]) == [1, 2]
    assert candidate_next_hops(0, topo, [True, False, True]) == [2]


@pytest.mark.parametrize("seed", range(10))
def test_strict_progress(seed):
    topo = generate_topology(SimConfig(), seed=seed)
    alive = [True] * topo.node_count
    for n in range(topo.node_count):
        for c in candidate_next_hops(n, topo, alive):
            assert c != n
            assert distance(topo.position(c), topo.base_station) < distance(
                topo.position(n), topo.base_station)
            assert distance(topo.position(n), topo.position(c)) <= topo.comm_radius
