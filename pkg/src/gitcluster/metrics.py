"""External clustering agreement metrics computed from a contingency table."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class ContingencyTable:
    """``counts[i, j]`` = points in predicted cluster ``i`` and true class ``j``."""

    counts: np.ndarray
    pred_labels: tuple = ()
    true_labels: tuple = ()

    @property
    def a(self):
        return self.counts.sum(axis=1)

    @property
    def b(self):
        return self.counts.sum(axis=0)

    @property
    def n(self):
        return int(self.counts.sum())


def contingency(pred, truth):
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"label vectors differ in length: {pred.size} vs {truth.size}")
    if pred.size == 0:
        raise ValueError("empty labelings")
    pu, pi = np.unique(pred, return_inverse=True)
    tu, ti = np.unique(truth, return_inverse=True)
    counts = np.zeros((pu.size, tu.size), dtype=np.int64)
    np.add.at(counts, (pi.ravel(), ti.ravel()), 1)
    return ContingencyTable(counts, tuple(pu.tolist()), tuple(tu.tolist()))


def _match(counts, policy):
    """Predicted cluster assigned to each true class (-1 when unmatched)."""
    r, s = counts.shape
    match = np.full(s, -1)
    if policy == "hungarian":
        # among count-maximal matchings prefer the larger F1 so ties do not
        # depend on label order; a unit of count outweighs any F1 total (<= n)
        a = counts.sum(axis=1)[:, None]
        b = counts.sum(axis=0)[None, :]
        contrib = 2.0 * counts * b / (a + b)
        n = counts.sum()
        rows, cols = linear_sum_assignment(counts * (n + 1.0) + contrib, maximize=True)
        match[cols] = rows
    elif policy == "majority":
        # every predicted cluster votes for its dominant class; a class keeps its best voter
        best = counts.argmax(axis=1)
        for i in range(r):
            j = best[i]
            if match[j] < 0 or counts[i, j] > counts[match[j], j]:
                match[j] = i
    else:
        raise ValueError(f"unknown matching policy {policy!r}")
    return match


def f1_weighted(table, matching="hungarian"):
    """Support-weighted F1 over true classes after cluster-to-class matching.

    With ``"hungarian"`` each predicted cluster serves at most one class;
    ``"majority"`` lets a cluster's dominant class claim it.
    """
    counts = table.counts
    a, b = table.a, table.b
    match = _match(counts, matching)
    total = 0.0
    for j in range(counts.shape[1]):
        i = match[j]
        if i < 0:
            continue
        tp = counts[i, j]
        if tp == 0:
            continue
        prec = tp / a[i]
        rec = tp / b[j]
        total += b[j] * 2 * prec * rec / (prec + rec)
    return float(total / table.n)


def _comb2(x):
    x = np.asarray(x, dtype=np.float64)
    return x * (x - 1) / 2


def ari(table):
    """Adjusted Rand index from the contingency-sum formula."""
    n = table.n
    if n < 2:
        raise ValueError("ARI needs at least two points")
    sum_ij = _comb2(table.counts).sum()
    sum_a = _comb2(table.a).sum()
    sum_b = _comb2(table.b).sum()
    expected = sum_a * sum_b / _comb2(n)
    maximum = (sum_a + sum_b) / 2
    denom = maximum - expected
    if denom == 0:
        # both partitions trivial in the same way
        return 1.0 if sum_ij == maximum else 0.0
    return float((sum_ij - expected) / denom)


def _entropy(sizes, n):
    p = sizes[sizes > 0] / n
    return float(-(p * np.log(p)).sum())


def mutual_information(table):
    counts = table.counts.astype(float)
    n = table.n
    nz = counts > 0
    outer = np.outer(table.a, table.b).astype(float)
    return float((counts[nz] / n * np.log(n * counts[nz] / outer[nz])).sum())


def nmi(table):
    """Mutual information over the geometric mean of the two entropies (natural log)."""
    n = table.n
    hx = _entropy(table.a, n)
    hy = _entropy(table.b, n)
    if hx == 0 or hy == 0:
        identical = table.counts.shape[0] == table.counts.shape[1] == 1
        return 1.0 if identical else 0.0
    mi = mutual_information(table)
    return float(min(1.0, max(0.0, mi / math.sqrt(hx * hy))))


def cover_rate(assigned, total):
    if total <= 0:
        raise ValueError("total must be positive")
    if not 0 <= assigned <= total:
        raise ValueError(f"assigned={assigned} outside [0, {total}]")
    return assigned / total


def evaluate(pred, truth, noise_label=-1, matching="hungarian"):
    """All metrics as a flat dict.

    Points whose truth label equals ``noise_label`` are dropped; predicted
    ``noise_label`` marks unassigned points, which lower the cover rate and
    are excluded from the agreement metrics.
    """
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise ValueError(f"label vectors differ in length: {pred.size} vs {truth.size}")
    keep = ~_is_noise(truth, noise_label)
    pred, truth = pred[keep], truth[keep]
    covered = ~_is_noise(pred, noise_label)
    out = {"cover_rate": cover_rate(int(covered.sum()), pred.size)}
    table = contingency(pred[covered], truth[covered])
    out.update(
        f1=f1_weighted(table, matching),
        ari=ari(table) if table.n >= 2 else 1.0,
        nmi=nmi(table),
        n_clusters_pred=int(table.counts.shape[0]),
        n_clusters_true=int(table.counts.shape[1]),
    )
    return {k: out[k] for k in ("f1", "ari", "nmi", "cover_rate", "n_clusters_pred", "n_clusters_true")}


def _is_noise(labels, noise_label):
    if labels.dtype.kind in "US":
        return labels == str(noise_label)
    return labels == noise_label

