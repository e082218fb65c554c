"""Point data container, CSV ingestion and the scale-normalized distance."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Raised for malformed input data, carrying a row/column position when known."""

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


def compute_sigma(points):
    """Per-dimension population standard deviation with zero-variance guarding.

    Dimensions whose deviation is exactly zero are replaced by
    ``1e-12 * max(1, max(sigma))`` so that distances stay finite.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[0] < 1:
        raise DataError("need at least one point")
    sigma = points.std(axis=0, ddof=0)
    eps = 1e-12 * max(1.0, float(sigma.max()))
    return np.where(sigma > 0, sigma, eps)


@dataclass(frozen=True)
class Dataset:
    """Immutable ``n x d`` point matrix plus its per-dimension deviations.

    Attributes
    ----------
    points : ndarray, shape (n, d)
    sigma : ndarray, shape (d,)
        Deviations used for distance normalization, always strictly positive.
    metadata : dict
        Free-form provenance (generator name, seed, ...).
    """

    points: np.ndarray
    sigma: np.ndarray = field(default=None)
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError("dataset must be a non-empty 2-D matrix")
        if not np.all(np.isfinite(pts)):
            bad = np.argwhere(~np.isfinite(pts))[0]
            raise DataError("non-finite value", row=int(bad[0]) + 1, column=int(bad[1]) + 1)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        sigma = compute_sigma(pts) if self.sigma is None else np.array(self.sigma, dtype=float)
        if sigma.shape != (pts.shape[1],) or np.any(sigma <= 0):
            raise DataError("sigma must be a positive vector matching the dimension")
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dims(self):
        return self.points.shape[1]

    def normalized(self):
        """Points divided by sigma; Euclidean distance here is ``normalized_distance``."""
        return self.points / self.sigma

    def scaled(self, factor):
        """A new dataset with every coordinate multiplied by ``factor`` (sigma recomputed)."""
        return Dataset(self.points * factor, metadata=dict(self.metadata))


def normalized_distance(x, y, sigma):
    """sqrt(sum_j (x_j - y_j)^2 / sigma_j^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if x.shape != y.shape or x.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: {x.shape}, {y.shape}, {sigma.shape}")
    return float(np.sqrt(np.sum(((x - y) / sigma) ** 2)))


def _resolve_column(label_column, header, width):
    if label_column is None:
        return None
    if isinstance(label_column, str):
        if label_column == "last":
            return width - 1
        if header is not None and label_column in header:
            return header.index(label_column)
        try:
            label_column = int(label_column)
        except ValueError:
            raise DataError(f"unknown label column {label_column!r}") from None
    idx = int(label_column)
    if idx < 0:
        idx += width
    if not 0 <= idx < width:
        raise DataError(f"label column {label_column} out of range for {width} columns")
    return idx


def load_csv(path, has_header=False, label_column=None):
    """Read a comma-separated file into a :class:`Dataset`.

    Parameters
    ----------
    path : str or Path
    has_header : bool
        Skip (and remember) the first row.
    label_column : int, str or None
        Column holding class labels; an index (negative allowed), a header
        name, or ``"last"``. It is removed from the features.

    Returns
    -------
    (Dataset, labels or None)
        Labels are returned as a numpy array of strings, row order preserved.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    header = None
    first_row = 1
    if has_header and rows:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_row = 2
    if not rows:
        raise DataError(f"{path} contains no data rows")

    width = len(rows[0])
    lab = _resolve_column(label_column, header, width)
    feats, labels = [], []
    for r, row in enumerate(rows, start=first_row):
        if len(row) != width:
            raise DataError(f"expected {width} fields, got {len(row)}", row=r)
        vals = []
        for c, cell in enumerate(row):
            if c == lab:
                labels.append(cell.strip())
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise DataError(f"non-numeric value {cell.strip()!r}", row=r, column=c + 1) from None
        feats.append(vals)
    if width - (lab is not None) < 1:
        raise DataError("no feature columns left after removing the label column")
    ds = Dataset(np.array(feats), metadata={"source": str(path)})
    return ds, (np.array(labels) if lab is not None else None)


def save_csv(path, points, labels=None, header=None):
    """Write points (and an optional trailing label column) as CSV."""
    points = np.asarray(points, dtype=float)
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        if header is not None:
            w.writerow(header)
        for i, row in enumerate(points):
            out = [repr(float(v)) for v in row]
            if labels is not None:
                out.append(str(labels[i]))
            w.writerow(out)
