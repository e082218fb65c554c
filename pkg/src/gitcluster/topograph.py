"""Weighted graph over local clusters built from boundary pairs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

WEIGHT_MODES = ("pairwise_exp", "intensity_product")


@dataclass(frozen=True)
class TopoGraph:
    """Local clusters as nodes, average boundary similarity as edge weight.

    Nodes are identified by the point index of their root. Edges are stored
    once with ``edge_a < edge_b``, sorted by ``(a, b)``; every weight is
    strictly positive.
    """

    roots: np.ndarray
    sizes: np.ndarray
    edge_a: np.ndarray
    edge_b: np.ndarray
    weights: np.ndarray
    weight_mode: str = "pairwise_exp"
    members: dict = field(default=None, compare=False, repr=False)

    @property
    def n_nodes(self):
        return self.roots.size

    @property
    def n_edges(self):
        return self.weights.size

    def size_of(self, root):
        return int(self.sizes[np.searchsorted(self.roots, root)])

    def edges(self):
        """Symmetric dict view ``{(a, b): w}`` holding both orientations."""
        out = {}
        for a, b, w in zip(self.edge_a.tolist(), self.edge_b.tolist(), self.weights.tolist()):
            out[(a, b)] = w
            out[(b, a)] = w
        return out

    def weight(self, a, b):
        if a > b:
            a, b = b, a
        hit = np.flatnonzero((self.edge_a == a) & (self.edge_b == b))
        return float(self.weights[hit[0]]) if hit.size else 0.0

    def __eq__(self, other):
        if not isinstance(other, TopoGraph):
            return NotImplemented
        return (
            self.weight_mode == other.weight_mode
            and np.array_equal(self.roots, other.roots)
            and np.array_equal(self.sizes, other.sizes)
            and np.array_equal(self.edge_a, other.edge_a)
            and np.array_equal(self.edge_b, other.edge_b)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


def point_similarity(x, y, pair_is_boundary):
    """exp(-||x - y||) for a boundary pair, zero otherwise."""
    if not pair_is_boundary:
        return 0.0
    return float(np.exp(-np.linalg.norm(np.asarray(x, float) - np.asarray(y, float))))


def merge_similarity(w_ij, w_ik, size_j, size_k):
    """Similarity of a cluster to the union of two others (size-weighted average)."""
    total = size_j + size_k
    if total <= 0:
        raise ValueError("merged cluster must be non-empty")
    return (size_j * w_ij + size_k * w_ik) / total


def build_topograph(state, dataset, field, mode="pairwise_exp"):
    """Aggregate boundary-pair similarities into local-cluster edge weights.

    ``pairwise_exp`` sums exp(-||x - y||) over boundary pairs;
    ``intensity_product`` sums (f(x) + f(y))^2 / 4 instead. Either sum is
    divided by the product of the two cluster sizes.
    """
    if mode not in WEIGHT_MODES:
        raise ValueError(f"unknown weight mode {mode!r}; expected one of {WEIGHT_MODES}")
    roots = np.asarray(state.roots, dtype=np.intp)
    sizes = np.array([len(state.clusters[int(r)]) for r in roots], dtype=np.int64)
    bp = state.boundary_pairs
    i, j = bp["i"], bp["j"]
    if mode == "pairwise_exp":
        diff = dataset.points[i] - dataset.points[j]
        s = np.exp(-np.sqrt(np.einsum("ij,ij->i", diff, diff)))
    else:
        f = field.values
        s = (f[i] + f[j]) ** 2 / 4.0

    ra = np.searchsorted(roots, bp["root_i"])
    rb = np.searchsorted(roots, bp["root_j"])
    lo, hi = np.minimum(ra, rb), np.maximum(ra, rb)
    m = roots.size
    keys = lo.astype(np.int64) * m + hi
    uniq, inv = np.unique(keys, return_inverse=True)
    total = np.bincount(inv, weights=s, minlength=uniq.size)
    na, nb = uniq // m, uniq % m
    w = total / (sizes[na] * sizes[nb])
    keep = w > 0
    na, nb, w = na[keep], nb[keep], w[keep]
    members = {int(r): state.clusters[int(r)] for r in roots}
    return TopoGraph(roots, sizes, roots[na], roots[nb], w, mode, members)


def to_dict(graph):
    node_id = {int(r): t for t, r in enumerate(graph.roots.tolist())}
    nodes = [
        {"id": t, "size": int(s), "root_point_index": int(r)}
        for t, (r, s) in enumerate(zip(graph.roots.tolist(), graph.sizes.tolist()))
    ]
    edges = [
        {"a": node_id[a], "b": node_id[b], "weight": float(w)}
        for a, b, w in zip(graph.edge_a.tolist(), graph.edge_b.tolist(), graph.weights.tolist())
    ]
    return {"weight_mode": graph.weight_mode, "nodes": nodes, "edges": edges}


def export_graph(graph, format="json"):
    """Serialize to ``json`` (lossless) or ``dot`` (labels at 6 significant digits)."""
    if format == "json":
        return json.dumps(to_dict(graph), indent=1, sort_keys=True) + "\n"
    if format == "dot":
        node_id = {int(r): t for t, r in enumerate(graph.roots.tolist())}
        lines = ["graph topograph {"]
        for t, s in enumerate(graph.sizes.tolist()):
            lines.append(f'  n{t} [label="{s}"];')
        for a, b, w in zip(graph.edge_a.tolist(), graph.edge_b.tolist(), graph.weights.tolist()):
            lines.append(f'  n{node_id[a]} -- n{node_id[b]} [label="{w:.6g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown export format {format!r}")


def parse_graph(text):
    """Inverse of ``export_graph(..., "json")``."""
    data = json.loads(text)
    nodes = sorted(data["nodes"], key=lambda d: d["id"])
    roots = np.array([d["root_point_index"] for d in nodes], dtype=np.intp)
    sizes = np.array([d["size"] for d in nodes], dtype=np.int64)
    edges = sorted(data["edges"], key=lambda d: (d["a"], d["b"]))
    a = np.array([roots[d["a"]] for d in edges], dtype=np.intp)
    b = np.array([roots[d["b"]] for d in edges], dtype=np.intp)
    w = np.array([d["weight"] for d in edges], dtype=float)
    return TopoGraph(roots, sizes, a, b, w, data.get("weight_mode", "pairwise_exp"))
