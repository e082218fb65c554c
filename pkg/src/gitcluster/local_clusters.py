"""Intensity growing process: steepest discrete ascent to local maxima.

Points are admitted in descending-intensity order. Each newcomer links to the
already-admitted neighbour with the largest intensity gain per unit of
Euclidean distance; a newcomer with no admitted neighbour starts a new local
cluster. Roots are propagated through a lookup table written at admission.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .neighbors import mutual_pairs, row_distances

BOUNDARY_DTYPE = np.dtype([("i", np.intp), ("j", np.intp), ("root_i", np.intp), ("root_j", np.intp)])


@dataclass(frozen=True)
class GrowthState:
    """Result of the growing process.

    Attributes
    ----------
    parent : ndarray of int
        ``parent[i] == i`` exactly for roots.
    root : ndarray of int
    roots : ndarray of int
        Root point indices, ascending.
    clusters : dict
        Root index to ascending member indices.
    boundary_pairs : structured ndarray
        Fields ``i, j, root_i, root_j`` with ``i < j``.
    """

    parent: np.ndarray
    root: np.ndarray
    roots: np.ndarray
    clusters: dict
    boundary_pairs: np.ndarray

    @property
    def n_clusters(self):
        return len(self.roots)

    def sizes(self):
        return {r: len(m) for r, m in self.clusters.items()}


def select_parent(i, field, graph, born, points):
    """Parent of point ``i`` among its neighbours for which ``born(j)`` holds.

    Returns ``None`` when no neighbour is born (``i`` becomes a root).
    A born neighbour at distance zero wins outright; remaining ties go to the
    smallest index.
    """
    f = field.values
    best, best_ratio = None, -np.inf
    for j in sorted(int(j) for j in graph.indices[i]):
        if not born(j):
            continue
        dist = float(np.linalg.norm(points[j] - points[i]))
        gain = f[j] - f[i]
        ratio = np.inf if dist == 0.0 else gain / dist
        if ratio > best_ratio:
            best, best_ratio = j, ratio
    return best


def select_parents(points, field, graph):
    """Vectorised :func:`select_parent` for every point at once."""
    n = graph.n
    parent = np.arange(n)
    if graph.width == 0:
        return parent
    nbr = graph.indices
    f = field.values
    rank = field.rank
    born = rank[nbr] < rank[:, None]

    dist = row_distances(points, nbr)
    gain = f[nbr] - f[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(dist > 0, gain / np.where(dist > 0, dist, 1.0), np.inf)
    ratio = np.where(born, ratio, -np.inf)

    best = ratio.max(axis=1)
    has = born.any(axis=1)
    tied = born & (ratio == best[:, None])
    pick = np.where(tied, nbr, n).min(axis=1)
    parent[has] = pick[has]
    return parent


def collect_boundary_pairs(root, graph):
    """Every mutual-neighbour pair whose endpoints have different roots, once."""
    a, b = mutual_pairs(graph)
    keep = root[a] != root[b]
    a, b = a[keep], b[keep]
    out = np.empty(a.size, dtype=BOUNDARY_DTYPE)
    out["i"], out["j"] = a, b
    out["root_i"], out["root_j"] = root[a], root[b]
    return out


def grow(dataset, graph, field):
    """Run the growing process and return the final :class:`GrowthState`."""
    n = dataset.n
    if graph.n != n or field.values.size != n:
        raise ValueError("dataset, neighbour graph and intensity sizes differ")
    parent = select_parents(dataset.points, field, graph)

    root = np.full(n, -1, dtype=np.intp)
    par = parent.tolist()
    rt = root.tolist()
    for i in field.order.tolist():
        p = par[i]
        rt[i] = i if p == i else rt[p]
    root = np.array(rt, dtype=np.intp)

    roots = np.flatnonzero(parent == np.arange(n))
    order = np.argsort(root, kind="stable")
    bounds = np.searchsorted(root[order], roots)
    members = np.split(order, bounds[1:])
    clusters = {int(r): m for r, m in zip(roots, members)}

    pairs = collect_boundary_pairs(root, graph)
    for arr in (parent, root, roots):
        arr.setflags(write=False)
    return GrowthState(parent, root, roots, clusters, pairs)
