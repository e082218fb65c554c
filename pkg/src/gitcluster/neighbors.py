"""Exact k-nearest-neighbour lists under the sigma-normalized distance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

# above this dimension a kd-tree is no better than a scan
TREE_MAX_DIMS = 16
_REL_TIE = 1e-9


@dataclass(frozen=True)
class NeighborGraph:
    """Per-point neighbour indices and distances.

    ``indices[i]`` holds the ``min(k, n-1)`` nearest other points of ``i``
    ordered by (distance, index); the point itself is never listed.
    """

    k: int
    indices: np.ndarray
    distances: np.ndarray
    contains_self: bool = False

    @property
    def n(self):
        return self.indices.shape[0]

    @property
    def width(self):
        return self.indices.shape[1]

    def neighbors(self, i):
        return self.indices[i]


def _exact_dist(z, i, cand):
    diff = z[cand] - z[i]
    return np.sqrt(np.einsum("...j,...j->...", diff, diff))


# float64 elements per temporary block (32 MB)
_BLOCK_ELEMS = 1 << 22


def row_distances(z, cand, block=None):
    """``d[i, t] = ||z[cand[i, t]] - z[i]||`` computed in row blocks."""
    d = np.empty(cand.shape)
    if block is None:
        block = max(1, _BLOCK_ELEMS // max(1, cand.shape[1] * z.shape[1]))
    for s in range(0, cand.shape[0], block):
        diff = z[cand[s:s + block]] - z[s:s + block, None, :]
        d[s:s + block] = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    return d


def _select(z, i, cand, m):
    cand = np.unique(cand[cand != i])
    d = _exact_dist(z, i, cand)
    order = np.lexsort((cand, d))[:m]
    return cand[order], d[order]


def _build_tree(z, m, workers):
    n = z.shape[0]
    tree = cKDTree(z)
    q = min(m + 2, n)
    tdist, tidx = tree.query(z, k=q, workers=workers)
    tdist = tdist.reshape(n, q)
    tidx = tidx.reshape(n, q)

    rows = np.arange(n)[:, None]
    is_self = tidx == rows
    # drop self; rows where self was pushed out by duplicates drop their last column instead
    drop = is_self.copy()
    no_self = ~is_self.any(axis=1)
    drop[no_self, -1] = True
    cand = tidx[~drop].reshape(n, q - 1)

    d = row_distances(z, cand)
    order = np.lexsort((cand, d), axis=1)[:, :m]
    idx = np.take_along_axis(cand, order, axis=1)
    dist = np.take_along_axis(d, order, axis=1)

    if q < n:
        # points not returned are at tree distance >= the largest returned one
        tmax = tdist[:, -1]
        kth = dist[:, m - 1]
        risky = np.flatnonzero(tmax <= kth * (1 + _REL_TIE) + 1e-300)
        for i in risky:
            r = kth[i] * (1 + 2 * _REL_TIE) + 1e-300
            ball = np.asarray(tree.query_ball_point(z[i], r), dtype=np.intp)
            idx[i], dist[i] = _select(z, i, ball, m)
    return idx, dist


def _build_brute(z, m, block=None):
    n = z.shape[0]
    if block is None:
        block = max(1, min(1024, _BLOCK_ELEMS // n))
    sq = np.einsum("ij,ij->i", z, z)
    extra = min(m + 8, n - 1)
    idx = np.empty((n, m), dtype=np.intp)
    dist = np.empty((n, m))
    for start in range(0, n, block):
        stop = min(start + block, n)
        approx = sq[start:stop, None] + sq[None, :] - 2.0 * (z[start:stop] @ z.T)
        rows = np.arange(start, stop)
        approx[rows - start, rows] = np.inf
        part = np.argpartition(approx, extra - 1, axis=1)[:, :extra]
        for r, i in enumerate(rows):
            cand = part[r]
            sel, d = _select(z, i, cand, m)
            # expansion error can misorder near the cut; rescan exactly then
            rest = approx[r].copy()
            rest[cand] = np.inf
            slack = 1e-8 * (sq[i] + sq.max()) + 1e-300
            if extra < n - 1 and rest.min() <= d[-1] ** 2 + slack:
                sel, d = _select(z, i, np.arange(n), m)
            idx[i], dist[i] = sel, d
    return idx, dist


def build_neighbor_graph(dataset, k, method="auto", workers=-1):
    """Exact kNN lists for every point of ``dataset``.

    Parameters
    ----------
    dataset : Dataset
    k : int
        Neighbour count; values >= n are clamped to n - 1.
    method : {"auto", "tree", "brute"}
        "auto" uses a kd-tree up to ``TREE_MAX_DIMS`` dimensions and a
        blocked scan above.
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    n = dataset.n
    if n < 1:
        raise ValueError("empty dataset")
    m = min(k, n - 1)
    if m == 0:
        return NeighborGraph(k, np.empty((n, 0), dtype=np.intp), np.empty((n, 0)))
    z = dataset.normalized()
    if method == "auto":
        method = "tree" if dataset.dims <= TREE_MAX_DIMS else "brute"
    if method == "tree":
        idx, dist = _build_tree(z, m, workers)
    elif method == "brute":
        idx, dist = _build_brute(z, m)
    else:
        raise ValueError(f"unknown method {method!r}")
    idx = np.ascontiguousarray(idx, dtype=np.intp)
    dist = np.ascontiguousarray(dist)
    idx.setflags(write=False)
    dist.setflags(write=False)
    return NeighborGraph(k, idx, dist)


def brute_force_knn(dataset, k):
    """O(n^2) reference implementation used to check the indexed search."""
    z = dataset.normalized()
    n = dataset.n
    m = min(k, n - 1)
    idx = np.empty((n, m), dtype=np.intp)
    dist = np.empty((n, m))
    others = np.arange(n)
    for i in range(n):
        idx[i], dist[i] = _select(z, i, others, m)
    return idx, dist


def mutual_neighbors(graph, i, j):
    """True iff ``j`` lists ``i`` and ``i`` lists ``j`` as neighbours."""
    n = graph.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"index out of range for {n} points: {i}, {j}")
    return bool(np.any(graph.indices[i] == j) and np.any(graph.indices[j] == i))


def mutual_pairs(graph):
    """All unordered mutual-neighbour pairs as two arrays ``(i, j)`` with ``i < j``."""
    n, w = graph.indices.shape
    src = np.repeat(np.arange(n, dtype=np.int64), w)
    dst = graph.indices.ravel().astype(np.int64)
    keys = np.sort(src * n + dst)
    fwd = src < dst
    a, b = src[fwd], dst[fwd]
    rev = b * n + a
    pos = np.searchsorted(keys, rev)
    pos[pos >= keys.size] = 0
    hit = keys[pos] == rev
    a, b = a[hit], b[hit]
    order = np.lexsort((b, a))
    return a[order], b[order]
