import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wsnsim import protocols as P
from wsnsim.config import SimConfig
from wsnsim.engine import initial_state, make_plan
from wsnsim.protocols import BASE, ScoreParams
from wsnsim.topology import generate_topology

W = ScoreParams(0.4, 0.2, 0.4, 5)
E0 = 0.5


def oracle_score(pts, bs, n, c, known, busy=0.0, w=W, e0=E0):
    """Score recomputed from raw coordinates."""
    d = math.dist
    geo = (d(pts[n], pts[c]) ** 2 + d(pts[c], bs) ** 2) / d(pts[n], bs) ** 2
    return w.w_e * (1 - known / e0) + w.w_l * busy + w.w_d * geo


def oracle_plan(pts, bs, radius, known, busy=None, alive=None):
    """Brute force over every sender/candidate pair; BASE scores w_d."""
    n_nodes = len(pts)
    alive = alive or [True] * n_nodes
    busy = busy or [0.0] * n_nodes
    plan = {}
    for n in range(n_nodes):
        if not alive[n]:
            continue
        best, best_score = BASE, W.w_d
        for c in range(n_nodes):
            if c == n or not alive[c]:
                continue
            if math.dist(pts[n], pts[c]) > radius:
                continue
            if not math.dist(pts[c], bs) < math.dist(pts[n], bs):
                continue
            s = oracle_score(pts, bs, n, c, known[c], busy[c])
            if s < best_score:
                best, best_score = c, s
        plan[n] = best
    return plan


def test_plan_direct():
    assert P.plan_direct([True, True, True]).next_hop == {0: BASE, 1: BASE, 2: BASE}
    assert P.plan_direct([]).next_hop == {}
    plan = P.plan_direct([True, False, True])
    assert plan.next_hop == {0: BASE, 2: BASE}
    assert plan.control_msgs == [] and plan.hypothetical_sync_count == 0


def test_score_geometry_ordering(hand_topology):
    # A(0,50) with candidates B(40,50), D(30,50); BS(100,50)
    pts = [(0, 50), (40, 50), (30, 50)]
    topo, _ = hand_topology(pts, bs=(100, 50), radius=50)
    assert P.geometry_ratio(0, 1, topo) == pytest.approx((1600 + 3600) / 10000)
    assert P.geometry_ratio(0, 2, topo) == pytest.approx((900 + 4900) / 10000)
    tables = P.initial_neighbor_tables(topo, E0)
    s_b = P.e3d_score(0, tables[0][1], topo, W, E0)
    s_d = P.e3d_score(0, tables[0][2], topo, W, E0)
    assert s_b == pytest.approx(oracle_score(pts, (100, 50), 0, 1, E0))
    assert s_d == pytest.approx(oracle_score(pts, (100, 50), 0, 2, E0))
    assert s_b < s_d
    plan = P.plan_e3d([True] * 3, tables, topo, W, E0)
    assert plan.next_hop[0] == 1


def test_score_tie_breaks_to_lower_id(hand_topology):
    # two co-located candidates
    topo, _ = hand_topology([(0, 50), (40, 50), (40, 50)], bs=(100, 50), radius=50)
    tables = P.initial_neighbor_tables(topo, E0)
    assert P.plan_e3d([True] * 3, tables, topo, W, E0).next_hop[0] == 1


def test_busy_penalizes_but_does_not_exclude(hand_topology):
    topo, _ = hand_topology([(0, 50), (40, 50)], bs=(100, 50), radius=50)
    tables = P.initial_neighbor_tables(topo, E0)
    tables[0][1].busy = True
    # 0.2 + 0.4*0.52 = 0.408 > 0.4: sink wins
    assert P.plan_e3d([True, True], tables, topo, W, E0).next_hop[0] == BASE
    topo, _ = hand_topology([(0, 50), (50, 50)], bs=(100, 50), radius=60)
    tables = P.initial_neighbor_tables(topo, E0)
    tables[0][1].busy = True
    # 0.2 + 0.4*0.5 = 0.4 is not strictly better than the sink either
    assert P.plan_e3d([True, True], tables, topo, W, E0).next_hop[0] == BASE
    topo, _ = hand_topology([(0, 50), (50, 50), (20, 50)], bs=(100, 50), radius=60)
    tables = P.initial_neighbor_tables(topo, E0)
    tables[0][1].busy = True
    # busy node 1 still ranks; 2 is cheaper now
    assert P.plan_e3d([True] * 3, tables, topo, W, E0).next_hop[0] == 2


def test_empty_candidates_fall_back_to_base(hand_topology):
    topo, _ = hand_topology([(0, 50), (40, 50)], bs=(100, 50), radius=50)
    tables = P.initial_neighbor_tables(topo, E0)
    assert P.plan_e3d([True, False], tables, topo, W, E0).next_hop == {0: BASE}
    assert P.plan_e3d([True, True], tables, topo, W, E0).next_hop[1] == BASE


FIVE = [(50, 100), (50, 125), (60, 122), (40, 120), (50, 80)]
FIVE_BS = (50, 200)


def test_e3d_decile_broadcast_reranks(hand_topology):
    topo, _ = hand_topology(FIVE, bs=FIVE_BS, radius=30, height=130)
    alive = [True] * 5
    tables = P.initial_neighbor_tables(topo, E0)
    plan0 = P.plan_e3d(alive, tables, topo, W, E0)
    assert plan0.next_hop == oracle_plan(FIVE, FIVE_BS, 30, [E0] * 5)
    assert plan0.next_hop[0] == 1

    residual = [E0, 0.42, E0, E0, E0]
    senders = P.status_triggers(alive, residual, [E0] * 5, [0] * 5, E0, 5)
    assert senders == [1]
    P.apply_status(tables, topo, senders, residual, [0] * 5, 5, 1)
    plan1 = P.plan_e3d(alive, tables, topo, W, E0, senders, ctrl_bits=64)
    assert plan1.next_hop == oracle_plan(FIVE, FIVE_BS, 30, residual)
    assert plan1.next_hop[0] == 2
    (msg,) = plan1.control_msgs
    assert msg.sender == 1 and msg.bits == 64
    assert set(msg.receivers) == {c for c in range(5) if c != 1
                                  and math.dist(FIVE[1], FIVE[c]) <= 30}


def test_status_triggers():
    alive = [True, True, True, False]
    announced = [0.5, 0.5, 0.44, 0.5]
    residual = [0.46, 0.44, 0.41, 0.1]
    relays = [0, 0, 5, 9]
    # node0 still above 90%; node1 crossed 90%; node2 busy; node3 dead
    assert P.status_triggers(alive, residual, announced, relays, 0.5, 5) == [1, 2]
    assert P.decile(0.5, 0.5) == 10
    assert P.decile(0.4999, 0.5) == 10
    assert P.decile(0.4499, 0.5) == 9


def test_busy_flag_lasts_one_round(hand_topology):
    topo, _ = hand_topology(FIVE, bs=FIVE_BS, radius=30, height=130)
    tables = P.initial_neighbor_tables(topo, E0)
    P.apply_status(tables, topo, [1], [E0] * 5, [0, 7, 0, 0, 0], 5, 1)
    assert tables[0][1].busy and tables[0][1].last_broadcast_round == 1
    P.apply_status(tables, topo, [], [E0] * 5, [0] * 5, 5, 2)
    assert not tables[0][1].busy


def test_ideal_diffusion_sees_exact_state(hand_topology):
    pts = FIVE[:4]
    topo, _ = hand_topology(pts, bs=FIVE_BS, radius=30, height=130)
    alive = [True] * 4
    residual = [E0, 0.46, E0, E0]  # 92%: no decile crossed, e3D stays stale
    tables = P.initial_neighbor_tables(topo, E0)
    assert P.status_triggers(alive, residual, [E0] * 4, [0] * 4, E0, 5) == []
    realistic = P.plan_e3d(alive, tables, topo, W, E0)
    ideal = P.plan_ideal_diffusion(alive, residual, [0] * 4, topo, W, E0)
    assert realistic.next_hop == oracle_plan(pts, FIVE_BS, 30, [E0] * 4)
    assert ideal.next_hop == oracle_plan(pts, FIVE_BS, 30, residual)
    assert realistic.next_hop[0] == 1 and ideal.next_hop[0] == 2


def test_ideal_load_term(hand_topology):
    pts = FIVE[:4]
    topo, _ = hand_topology(pts, bs=FIVE_BS, radius=30, height=130)
    prev = [0, 3, 0, 0]
    plan = P.plan_ideal_diffusion([True] * 4, [E0] * 4, prev, topo, W, E0)
    busy = [min(r / 5, 1) for r in prev]
    assert plan.next_hop == oracle_plan(pts, FIVE_BS, 30, [E0] * 4, busy=busy)
    assert plan.next_hop[0] == 2


def test_ideal_sync_count():
    topo = generate_topology(SimConfig(node_count=10), seed=1)
    plan = P.plan_ideal_diffusion([True] * 10, [E0] * 10, [0] * 10, topo, W, E0)
    assert plan.hypothetical_sync_count == 90
    assert plan.control_msgs == []


@pytest.mark.parametrize("seed", range(1, 6))
def test_ideal_equals_e3d_before_any_drain(seed):
    cfg = SimConfig(seed=seed)
    a = make_plan(initial_state(cfg.with_(protocol="e3d")))
    b = make_plan(initial_state(cfg.with_(protocol="ideal_diffusion")))
    assert a.next_hop == b.next_hop


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 50), st.lists(st.floats(0.01, 1.0), min_size=30, max_size=30),
       st.sampled_from([0.25, 2.0, 8.0, 1024.0]))
def test_selection_scale_invariant(seed, fractions, k):
    topo = generate_topology(SimConfig(node_count=30, comm_radius_m=40), seed=seed)
    alive = [True] * 30
    residual = [f * E0 for f in fractions]
    base = P.plan_ideal_diffusion(alive, residual, [0] * 30, topo, W, E0)
    scaled = P.plan_ideal_diffusion(alive, [r * k for r in residual], [0] * 30, topo, W, E0 * k)
    assert base.next_hop == scaled.next_hop
    heads = P.plan_ideal_clustering(alive, residual, topo, 0.2)
    heads_k = P.plan_ideal_clustering(alive, [r * k for r in residual], topo, 0.2)
    assert heads.next_hop == heads_k.next_hop


@pytest.mark.parametrize("seed", range(5))
def test_diffusion_plans_make_progress(seed):
    topo = generate_topology(SimConfig(), seed=seed)
    alive = [True] * topo.node_count
    alive[3] = alive[17] = False
    plan = P.plan_ideal_diffusion(alive, [E0] * 100, [2] * 100, topo, W, E0)
    assert set(plan.next_hop) == {i for i in range(100) if alive[i]}
    for n, t in plan.next_hop.items():
        if t != BASE:
            assert alive[t]
            assert topo.dist_to_bs[t] < topo.dist_to_bs[n]


def test_random_clustering_degenerate_probabilities():
    topo = generate_topology(SimConfig(node_count=10), seed=2)
    alive = [True] * 10
    everyone = P.plan_random_clustering(alive, topo, 1.0, seed=1, round_index=0)
    assert everyone.cluster_heads == frozenset(range(10))
    assert set(everyone.next_hop.values()) == {BASE}
    assert all(m.kind == "advert" for m in everyone.control_msgs)
    nobody = P.plan_random_clustering(alive, topo, 0.0, seed=1, round_index=0)
    assert not nobody.cluster_heads
    assert set(nobody.next_hop.values()) == {BASE}
    assert nobody.control_msgs == []


def test_random_clustering_rejects_bad_probability():
    topo = generate_topology(SimConfig(node_count=3), seed=2)
    with pytest.raises(ValueError):
        P.plan_random_clustering([True] * 3, topo, 1.5, seed=1, round_index=0)


def test_random_clustering_is_replayable():
    topo = generate_topology(SimConfig(node_count=10), seed=2)
    alive = [True] * 10
    runs = [P.plan_random_clustering(alive, topo, 0.3, seed=9, round_index=4) for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]
    assert [P.election_draws(9, 4, 10)[i] < 0.3 for i in range(10)] == [
        i in runs[0].cluster_heads for i in range(10)]


@pytest.mark.parametrize("seed", range(8))
def test_clustering_structure(seed):
    topo = generate_topology(SimConfig(node_count=40), seed=seed)
    alive = [True] * 40
    alive[5] = False
    plan = P.plan_random_clustering(alive, topo, 0.2, seed=seed, round_index=3, ctrl_bits=64)
    heads = plan.cluster_heads
    joins = [m for m in plan.control_msgs if m.kind == "join"]
    adverts = [m for m in plan.control_msgs if m.kind == "advert"]
    assert len(adverts) == len(heads)
    if heads:
        assert len(joins) == len(plan.next_hop) - len(heads)
    for n, t in plan.next_hop.items():
        if n in heads:
            assert t == BASE
        elif heads:
            assert t in heads  # never member -> member
            nearest = min(heads, key=lambda h: (math.dist(topo.position(n), topo.position(h)), h))
            assert t == nearest
    for m in adverts:
        assert all(topo.dist[m.sender, r] <= topo.comm_radius and alive[r] for r in m.receivers)


def test_ideal_clustering_examples():
    topo = generate_topology(SimConfig(node_count=10), seed=2)
    plan = P.plan_ideal_clustering([True] * 10, [E0] * 10, topo, 0.2)
    assert plan.cluster_heads == {0, 1}
    assert plan.hypothetical_sync_count == 90
    assert plan.control_msgs == []

    single = P.plan_ideal_clustering([False, False, True] + [False] * 7, [E0] * 10, topo, 0.2)
    assert single.cluster_heads == {2} and single.next_hop == {2: BASE}

    topo5 = generate_topology(SimConfig(node_count=5), seed=2)
    energies = [0.3, 0.1, 0.5, 0.2, 0.4]
    expected = set(sorted(range(5), key=lambda i: -energies[i])[:2])
    plan = P.plan_ideal_clustering([True] * 5, energies, topo5, 0.4)
    assert plan.cluster_heads == expected == {2, 4}


def test_ideal_head_count_rounds_half_up():
    assert P.ideal_head_count(0.05, 10) == 1
    assert P.ideal_head_count(0.05, 30) == 2  # 1.5 rounds up
    assert P.ideal_head_count(0.0, 30) == 1


def test_protocol_kind_strings():
    assert [k.value for k in P.ProtocolKind] == [
        "direct", "e3d", "ideal_diffusion", "random_clustering", "ideal_clustering"]
    assert P.ProtocolKind("e3d").is_diffusion
    assert P.ProtocolKind("ideal_clustering").is_ideal
