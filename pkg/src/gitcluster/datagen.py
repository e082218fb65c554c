"""Synthetic benchmark shapes with Gaussian jitter, uniform background noise
and multi-scale mixing.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .dataset import Dataset

SHAPES = ("circles", "moons", "blobs")
RNG_NAME = "numpy.random.Generator(PCG64)"
NOISE_LABEL = -1

# Gaussian jitter grid for the moons robustness curve
NOISE_LEVELS = tuple(round(0.02 * t, 2) for t in range(1, 14))
# scale factors for the mixed-circles curve
SCALE_FACTORS = (1, 2, 5, 10, 20, 50, 100)


@dataclass(frozen=True)
class SyntheticSpec:
    shape: str = "moons"
    n: int = 1000
    seed: int = 0
    gaussian_noise: float = 0.0
    uniform_noise_fraction: float = 0.0
    scale_factor: float = 1.0
    # circles: inner radius as a fraction of the outer (unit) radius
    circle_factor: float = 0.5
    # moons: separation of the lower moon (sklearn-style layout at 0.5)
    moon_offset: float = 0.5
    blob_centers: tuple = ((0.0, 0.0), (5.0, 0.0), (2.5, 4.33))
    blob_std: float = 0.8
    # optional multi-scale copy appended after generation
    mix_scale: float | None = None

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ValueError(f"unknown shape {self.shape!r}; expected one of {SHAPES}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        if not (self.gaussian_noise >= 0 and math.isfinite(self.gaussian_noise)):
            raise ValueError("gaussian_noise must be finite and >= 0")
        if not 0 <= self.uniform_noise_fraction < 1:
            raise ValueError("uniform_noise_fraction must be in [0, 1)")
        if not (self.scale_factor > 0 and math.isfinite(self.scale_factor)):
            raise ValueError("scale_factor must be positive")
        if not 0 < self.circle_factor < 1:
            raise ValueError("circle_factor must be in (0, 1)")
        if self.mix_scale is not None and not self.mix_scale > 0:
            raise ValueError("mix_scale must be positive")
        if self.shape == "blobs" and len(self.blob_centers) < 1:
            raise ValueError("blobs need at least one center")

    @property
    def n_classes(self):
        return len(self.blob_centers) if self.shape == "blobs" else 2

    def to_json(self):
        return json.dumps({**asdict(self), "rng": RNG_NAME}, indent=1, sort_keys=True)


def split_counts(n, c):
    """Deterministic near-even split: the first ``n % c`` classes get one extra."""
    base, extra = divmod(n, c)
    return [base + (t < extra) for t in range(c)]


def _circles(counts, rng, factor):
    pts, labs = [], []
    for lab, (m, r) in enumerate(zip(counts, (1.0, factor))):
        t = rng.uniform(0.0, 2 * np.pi, m)
        pts.append(np.column_stack([r * np.cos(t), r * np.sin(t)]))
        labs.append(np.full(m, lab))
    return np.vstack(pts), np.concatenate(labs)


def _moons(counts, rng, offset):
    t0 = rng.uniform(0.0, np.pi, counts[0])
    t1 = rng.uniform(0.0, np.pi, counts[1])
    upper = np.column_stack([np.cos(t0), np.sin(t0)])
    lower = np.column_stack([1.0 - np.cos(t1), 1.0 - np.sin(t1) - offset])
    return np.vstack([upper, lower]), np.repeat([0, 1], counts)


def _blobs(counts, rng, centers, std):
    centers = np.asarray(centers, dtype=float)
    pts = [rng.normal(c, std, size=(m, centers.shape[1])) for c, m in zip(centers, counts)]
    return np.vstack(pts), np.repeat(np.arange(len(counts)), counts)


def generate(spec):
    """Points and integer labels for ``spec``; uniform noise points get label -1."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    n_noise = int(math.floor(spec.uniform_noise_fraction * spec.n))
    counts = split_counts(spec.n - n_noise, spec.n_classes)
    if spec.shape == "circles":
        pts, labs = _circles(counts, rng, spec.circle_factor)
    elif spec.shape == "moons":
        pts, labs = _moons(counts, rng, spec.moon_offset)
    else:
        pts, labs = _blobs(counts, rng, spec.blob_centers, spec.blob_std)

    if spec.gaussian_noise > 0:
        pts = pts + rng.normal(0.0, spec.gaussian_noise, size=pts.shape)
    if n_noise:
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        noise = rng.uniform(lo, hi, size=(n_noise, pts.shape[1]))
        pts = np.vstack([pts, noise])
        labs = np.concatenate([labs, np.full(n_noise, NOISE_LABEL)])

    perm = rng.permutation(pts.shape[0])
    pts, labs = pts[perm] * spec.scale_factor, labs[perm]

    meta = {"generator": spec.shape, "rng": RNG_NAME, "seed": spec.seed, "spec": asdict(spec)}
    ds = Dataset(pts, metadata=meta)
    if spec.mix_scale is not None:
        ds, labs = multiscale_mix(ds, labs, spec.mix_scale)
    return ds, labs


def _boxes_overlap(lo1, hi1, lo2, hi2):
    return bool(np.all(lo1 <= hi2) and np.all(lo2 <= hi1))


def multiscale_mix(base, labels, factor, offset=None):
    """Append a copy of ``base`` scaled by ``factor`` and translated by ``offset``.

    With ``offset=None`` the copy is placed to the right of the original
    along the first axis with a gap of one tenth of the wider box. Copy
    labels are shifted past the largest original label (noise stays -1).
    """
    if not factor > 0:
        raise ValueError("factor must be positive")
    pts = base.points
    labels = np.asarray(labels)
    copy = pts * factor
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    if offset is None:
        clo, chi = copy.min(axis=0), copy.max(axis=0)
        gap = 0.1 * max(float((hi - lo).max()), float((chi - clo).max()), 1e-12)
        offset = np.zeros(pts.shape[1])
        offset[0] = hi[0] - clo[0] + gap
    offset = np.asarray(offset, dtype=float)
    copy = copy + offset
    if _boxes_overlap(lo, hi, copy.min(axis=0), copy.max(axis=0)):
        raise ValueError("scaled copy overlaps the original; choose a larger offset")
    shift = int(labels[labels != NOISE_LABEL].max()) + 1 if np.any(labels != NOISE_LABEL) else 0
    new_labels = np.where(labels == NOISE_LABEL, NOISE_LABEL, labels + shift)
    meta = dict(base.metadata, mix_scale=factor, mix_offset=offset.tolist())
    return Dataset(np.vstack([pts, copy]), metadata=meta), np.concatenate([labels, new_labels])
