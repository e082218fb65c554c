"""Prior-guided greedy merging of topo-graph nodes into final clusters.

Edges are visited strongest first. A merge is kept only if the transport
cost between the resulting class-size proportions and the prior proportions
does not go up.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

# float slack for "cost did not increase"; costs live in [0, 1]
COST_TOL = 1e-12


class PriorError(ValueError):
    pass


@dataclass(frozen=True)
class PriorProportion:
    """Class proportions, normalized and sorted in descending order."""

    q: tuple

    def __post_init__(self):
        vals = [float(v) for v in self.q]
        if not vals:
            raise PriorError("prior needs at least one class")
        if any(not math.isfinite(v) or v <= 0 for v in vals):
            raise PriorError(f"prior proportions must be positive, got {vals}")
        total = math.fsum(vals)
        object.__setattr__(self, "q", tuple(sorted((v / total for v in vals), reverse=True)))

    @classmethod
    def uniform(cls, c):
        if int(c) != c or c < 1:
            raise PriorError(f"class count must be a positive integer, got {c!r}")
        return cls((1.0,) * int(c))

    @classmethod
    def parse(cls, text):
        """From ``"0.5,0.3,0.2"`` style text."""
        try:
            return cls(tuple(float(t) for t in text.split(",") if t.strip()))
        except ValueError as exc:
            raise PriorError(f"cannot parse proportions {text!r}: {exc}") from None

    @property
    def c(self):
        return len(self.q)


def transport_cost(p, q):
    """Cost of moving proportion vector ``p`` onto ``q``.

    Both vectors are sorted descending and zero-padded to a common length;
    matching slots cost nothing and all others cost one, so the optimum is
    half the L1 gap between the sorted vectors.
    """
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    q = np.sort(np.asarray(q, dtype=float))[::-1]
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"p must be a non-negative vector summing to 1, got sum {p.sum()}")
    m = max(p.size, q.size)
    p = np.pad(p, (0, m - p.size))
    q = np.pad(q, (0, m - q.size))
    return 0.5 * float(np.abs(p - q).sum())


def proportion_score(p, q):
    """exp(-transport_cost(p, q)); one for a perfect match."""
    if isinstance(q, PriorProportion):
        q = q.q
    return math.exp(-transport_cost(p, q))


def _cost_from_top(top_desc, n, q):
    """Transport cost from the ``len(q)`` largest class sizes (descending).

    Classes beyond the first ``len(q)`` face zero prior mass, so only their
    total matters, which is ``n`` minus the top sum.
    """
    acc = 0.0
    covered = 0
    for t, qt in enumerate(q):
        if t < len(top_desc):
            acc += abs(top_desc[t] / n - qt)
            covered += top_desc[t]
        else:
            acc += qt
    acc += (n - covered) / n
    return 0.5 * acc


class ClassMap:
    """Union structure over topo-graph nodes with per-class sample counts.

    ``hypothetical_cost`` evaluates a merge without touching any state; only
    ``merge`` mutates.
    """

    def __init__(self, roots, sizes, q):
        self.roots = [int(r) for r in roots]
        self.pos = {r: t for t, r in enumerate(self.roots)}
        self.link = list(range(len(self.roots)))
        self.count = [int(s) for s in sizes]
        self.n = sum(self.count)
        self.q = tuple(q)
        self.sorted_sizes = sorted(self.count)
        self.n_classes = len(self.roots)

    def find(self, t):
        link = self.link
        while link[t] != t:
            link[t] = link[link[t]]
            t = link[t]
        return t

    def snapshot(self):
        return (tuple(self.find(t) for t in range(len(self.link))), tuple(self.count),
                tuple(self.sorted_sizes), self.n_classes)

    def cost(self):
        c = len(self.q)
        return _cost_from_top(self.sorted_sizes[::-1][:c], self.n, self.q)

    def hypothetical_cost(self, a, b):
        """Cost after merging the classes of nodes ``a`` and ``b`` (positions)."""
        c = len(self.q)
        sa, sb = self.count[self.find(a)], self.count[self.find(b)]
        top = self.sorted_sizes[-(c + 2):]
        for s in (sa, sb):
            k = bisect.bisect_left(top, s)
            if k < len(top) and top[k] == s:
                del top[k]
        bisect.insort(top, sa + sb)
        return _cost_from_top(top[::-1][:c], self.n, self.q)

    def merge(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        # lower position keeps the class id, mirroring "class of i absorbs class of j"
        if rb < ra:
            ra, rb = rb, ra
        sa, sb = self.count[ra], self.count[rb]
        for s in (sa, sb):
            del self.sorted_sizes[bisect.bisect_left(self.sorted_sizes, s)]
        bisect.insort(self.sorted_sizes, sa + sb)
        self.link[rb] = ra
        self.count[ra] = sa + sb
        self.count[rb] = 0
        self.n_classes -= 1
        return ra


@dataclass
class MergePlan:
    """Outcome of edge filtering.

    ``scores`` holds transport costs: the cost of the initial partition
    followed by the cost after each accepted merge.
    """

    class_of: dict
    members_of: dict
    size_of: dict
    scores: list
    merges: list
    labels: np.ndarray = field(repr=False)

    @property
    def n_classes(self):
        return len(self.members_of)

    @property
    def proportion_scores(self):
        return [math.exp(-s) for s in self.scores]

    def labels_for(self, root):
        return np.array([self.class_of[int(r)] for r in root], dtype=np.intp)


def auto_filter(graph, prior, n, root=None):
    """Greedy descending-weight merge guided by ``prior``.

    Parameters
    ----------
    graph : TopoGraph
    prior : PriorProportion or int
        An int is read as a class count with uniform proportions.
    n : int
        Total number of points; must equal the summed node sizes.
    root : array of int, optional
        Per-point root index; when given, per-point labels are filled in.
    """
    if not isinstance(prior, PriorProportion):
        prior = PriorProportion.uniform(prior)
    if graph.n_nodes == 0:
        raise ValueError("topo-graph has no nodes")
    if int(graph.sizes.sum()) != n:
        raise ValueError(f"node sizes sum to {int(graph.sizes.sum())}, expected {n}")
    c = prior.c
    if c > graph.n_nodes:
        raise PriorError(f"prior asks for {c} classes but only {graph.n_nodes} local clusters exist")

    cm = ClassMap(graph.roots, graph.sizes, prior.q)
    scores = [cm.cost()]
    merges = []

    order = np.lexsort((graph.edge_b, graph.edge_a, -graph.weights))
    ea = [cm.pos[int(r)] for r in graph.edge_a[order]]
    eb = [cm.pos[int(r)] for r in graph.edge_b[order]]
    for a, b in zip(ea, eb):
        if cm.find(a) == cm.find(b):
            continue
        if cm.n_classes - 1 < c:
            break
        sc = cm.hypothetical_cost(a, b)
        if sc <= scores[-1] + COST_TOL:
            cm.merge(a, b)
            scores.append(sc)
            merges.append((cm.roots[a], cm.roots[b]))

    # dense class ids ordered by the smallest point index in each class
    reps = [cm.find(t) for t in range(len(cm.roots))]
    first = {}
    for t, r in enumerate(cm.roots):
        lo = int(graph.members[r].min()) if graph.members is not None else r
        first[reps[t]] = min(first.get(reps[t], lo), lo)
    dense = {rep: cid for cid, rep in enumerate(sorted(first, key=first.get))}
    class_of = {r: dense[reps[t]] for t, r in enumerate(cm.roots)}
    members_of = {cid: [] for cid in range(len(dense))}
    for r in cm.roots:
        members_of[class_of[r]].append(r)
    size_of = {dense[rep]: cm.count[rep] for rep in dense}

    labels = np.empty(0, dtype=np.intp)
    if root is not None:
        lut = np.full(int(np.max(root)) + 1, -1, dtype=np.intp)
        for r, cid in class_of.items():
            lut[r] = cid
        labels = lut[np.asarray(root)]
    return MergePlan(class_of, members_of, size_of, scores, merges, labels)
