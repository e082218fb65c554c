import json
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gitcluster.dataset import Dataset
from gitcluster.intensity import IntensityField, growth_order
from gitcluster.local_clusters import BOUNDARY_DTYPE, GrowthState
from gitcluster.pipeline import GitConfig, run_git
from gitcluster.topograph import (
    TopoGraph,
    build_topograph,
    export_graph,
    merge_similarity,
    parse_graph,
    point_similarity,
)


def make_state(points, assignment, pairs):
    """GrowthState from an explicit cluster assignment and boundary pairs.

    The first member of each cluster acts as its root.
    """
    assignment = np.asarray(assignment)
    n = assignment.size
    root = np.empty(n, dtype=np.intp)
    clusters = {}
    for lab in np.unique(assignment):
        members = np.flatnonzero(assignment == lab)
        root[members] = members[0]
        clusters[int(members[0])] = members
    roots = np.array(sorted(clusters), dtype=np.intp)
    bp = np.empty(len(pairs), dtype=BOUNDARY_DTYPE)
    for t, (i, j) in enumerate(pairs):
        bp[t] = (i, j, root[i], root[j])
    ds = Dataset(np.asarray(points, dtype=float))
    return GrowthState(root.copy(), root, roots, clusters, bp), ds


def flat_field(n, value=0.8):
    v = np.full(n, value)
    return IntensityField(v, growth_order(v))


def two_and_three():
    # clusters {0,1} and {2,3,4}; one boundary pair (1, 2) at distance ln 2
    x = [0.0, 1.0, 1.0 + math.log(2), 5.0, 6.0]
    pts = [[v] for v in x]
    return make_state(pts, [0, 0, 1, 1, 1], [(1, 2)])


def test_point_similarity():
    assert point_similarity([0.0, 0.0], [3.0, 4.0], False) == 0.0
    assert point_similarity([1.0, 2.0], [1.0, 2.0], True) == 1.0
    assert point_similarity([0.0], [math.log(2)], True) == pytest.approx(0.5, abs=1e-15)


def test_pairwise_exp_hand_value():
    state, ds = two_and_three()
    g = build_topograph(state, ds, flat_field(5))
    assert g.n_nodes == 2 and g.n_edges == 1
    assert g.weight(0, 2) == pytest.approx(0.5 / 6, abs=1e-15)
    assert g.weight(2, 0) == g.weight(0, 2)


def test_intensity_product_hand_value():
    state, ds = two_and_three()
    g = build_topograph(state, ds, flat_field(5, 0.8), mode="intensity_product")
    assert g.weight(0, 2) == pytest.approx(1.6 ** 2 / 24, abs=1e-15)
    assert g.weight_mode == "intensity_product"


def test_unknown_mode():
    state, ds = two_and_three()
    with pytest.raises(ValueError, match="weight mode"):
        build_topograph(state, ds, flat_field(5), mode="cosine")


def test_no_pairs_gives_edgeless_graph():
    state, ds = make_state([[0.0], [1.0], [9.0]], [0, 0, 1], [])
    g = build_topograph(state, ds, flat_field(3))
    assert g.n_nodes == 2 and g.n_edges == 0
    assert g.sizes.tolist() == [2, 1]
    doc = json.loads(export_graph(g))
    assert len(doc["nodes"]) == 2 and doc["edges"] == []


def test_merge_similarity_values():
    assert merge_similarity(0.3, 0.3, 4, 7) == pytest.approx(0.3, abs=1e-15)
    assert merge_similarity(0.4, 0.1, 1, 3) == pytest.approx(0.175, abs=1e-15)
    with pytest.raises(ValueError):
        merge_similarity(0.4, 0.1, 0, 0)


def random_instance(rng, n=10, n_clusters=3):
    pts = rng.normal(size=(n, 2))
    assignment = np.concatenate([np.arange(n_clusters), rng.integers(0, n_clusters, n - n_clusters)])
    rng.shuffle(assignment)
    cross = [(i, j) for i in range(n) for j in range(i + 1, n) if assignment[i] != assignment[j]]
    keep = rng.random(len(cross)) < 0.5
    pairs = [p for p, kp in zip(cross, keep) if kp] or cross[:1]
    return pts, assignment, pairs


def upgma_gap(rng):
    """|Lance-Williams update - direct recomputation| on one random instance."""
    pts, assignment, pairs = random_instance(rng)
    state, ds = make_state(pts, assignment, pairs)
    g = build_topograph(state, ds, flat_field(len(pts)))
    ri, rj, rk = (int(r) for r in g.roots)
    merged = np.where(assignment == assignment[rk], assignment[rj], assignment)
    state2, _ = make_state(pts, merged, pairs)
    g2 = build_topograph(state2, ds, flat_field(len(pts)))
    lw = merge_similarity(g.weight(ri, rj), g.weight(ri, rk), g.size_of(rj), g.size_of(rk))

    # third opinion: plain double sum over the united member set
    pair_set = {frozenset(p) for p in pairs}
    clusters = {t: np.flatnonzero(merged == lab) for t, lab in enumerate(np.unique(merged))}
    ci = next(t for t, m in clusters.items() if ri in m)
    cjk = next(t for t, m in clusters.items() if rj in m)

    def sim(x, y):
        return math.exp(-np.linalg.norm(pts[x] - pts[y])) if frozenset((x, y)) in pair_set else 0.0

    direct = oracles.upgma_similarity(pts, clusters, ci, cjk, sim)
    return max(abs(lw - g2.weight(ri, min(rj, rk))), abs(lw - direct))


def test_upgma_consistency_random():
    rng = np.random.default_rng(11)
    assert max(upgma_gap(rng) for _ in range(100)) <= 1e-12


def test_upgma_ten_point_instance():
    pts = np.arange(20, dtype=float).reshape(10, 2) * 0.3
    assignment = [0, 0, 0, 1, 1, 1, 2, 2, 2, 2]
    pairs = [(2, 3), (0, 4), (5, 6), (1, 7), (4, 8), (2, 9)]
    state, ds = make_state(pts, assignment, pairs)
    g = build_topograph(state, ds, flat_field(10))
    lw = merge_similarity(g.weight(0, 3), g.weight(0, 6), 3, 4)
    direct = sum(math.exp(-np.linalg.norm(pts[a] - pts[b])) for a, b in pairs
                 if (a < 3) != (b < 3)) / (3 * 7)
    assert lw == pytest.approx(direct, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_weight_invariant_to_cluster_relabel(seed):
    rng = np.random.default_rng(seed)
    pts, assignment, pairs = random_instance(rng, n=12, n_clusters=4)
    perm = rng.permutation(12)
    inv = np.argsort(perm)
    # same geometry, points listed in a different order, so roots and ids change
    state, ds = make_state(pts, assignment, pairs)
    state2, ds2 = make_state(pts[perm], np.asarray(assignment)[perm],
                             [(min(inv[a], inv[b]), max(inv[a], inv[b])) for a, b in pairs])
    g = build_topograph(state, ds, flat_field(12))
    g2 = build_topograph(state2, ds2, flat_field(12))

    def by_members(graph, point_map):
        out = {}
        for a, b, w in zip(graph.edge_a, graph.edge_b, graph.weights):
            key = frozenset((frozenset(point_map[graph.members[int(a)]].tolist()),
                             frozenset(point_map[graph.members[int(b)]].tolist())))
            out[key] = w
        return out

    e1 = by_members(g, np.arange(12))
    e2 = by_members(g2, perm)
    assert e1.keys() == e2.keys()
    for key in e1:
        assert e1[key] == pytest.approx(e2[key], rel=1e-12)


def test_invariants_on_moons(moons_1000):
    ds, _ = moons_1000
    res = run_git(ds, GitConfig(k=10, prior=2))
    g = res.topograph
    assert int(g.sizes.sum()) == ds.n
    assert np.all(g.edge_a < g.edge_b)
    assert np.all(g.weights > 0)
    e = g.edges()
    assert all(e[(a, b)] == e[(b, a)] for a, b in e)
    # every edge is supported by a boundary pair
    bp = res.growth.boundary_pairs
    support = {(min(a, b), max(a, b)) for a, b in zip(bp["root_i"], bp["root_j"])}
    assert set(zip(g.edge_a.tolist(), g.edge_b.tolist())) <= support


def test_export_round_trip_and_determinism(moons_1000):
    ds, _ = moons_1000
    g = run_git(ds, GitConfig(k=10, prior=2)).topograph
    text = export_graph(g, "json")
    assert parse_graph(text) == g
    assert export_graph(parse_graph(text), "json") == text
    assert export_graph(g, "dot") == export_graph(g, "dot")
    with pytest.raises(ValueError, match="format"):
        export_graph(g, "graphml")


def test_json_schema_sorted():
    state, ds = two_and_three()
    doc = json.loads(export_graph(build_topograph(state, ds, flat_field(5))))
    assert doc["nodes"] == [{"id": 0, "root_point_index": 0, "size": 2},
                            {"id": 1, "root_point_index": 2, "size": 3}]
    assert doc["edges"] == [{"a": 0, "b": 1, "weight": pytest.approx(0.5 / 6)}]


def test_dot_format():
    state, ds = two_and_three()
    dot = export_graph(build_topograph(state, ds, flat_field(5)), "dot")
    assert dot.startswith("graph topograph {\n")
    assert '  n0 [label="2"];' in dot
    assert '  n0 -- n1 [label="0.0833333"];' in dot
    assert dot.rstrip().endswith("}")


def test_parse_empty_graph():
    g = TopoGraph(np.array([3]), np.array([4]), np.array([], dtype=np.intp),
                  np.array([], dtype=np.intp), np.array([]))
    assert parse_graph(export_graph(g)) == g


def test_two_rings_outer_ring_has_cycle(circles_1000):
    ds, y = circles_1000
    g = run_git(ds, GitConfig(k=20, prior=2)).topograph
    radius = np.linalg.norm(ds.points, axis=1)
    outer = int(np.argmax([radius[y == c].mean() for c in (0, 1)]))
    ring = {int(r) for r in g.roots if np.bincount(y[g.members[int(r)]], minlength=2).argmax() == outer}
    nxg = nx.Graph()
    nxg.add_edges_from((a, b) for a, b in zip(g.edge_a.tolist(), g.edge_b.tolist())
                       if a in ring and b in ring)
    assert len(ring) >= 3
    assert nx.cycle_basis(nxg)
