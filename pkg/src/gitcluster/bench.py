"""Wall-clock scaling sweeps on two-Gaussian mixtures."""

from __future__ import annotations

import os
import platform
import statistics
from time import perf_counter

from .datagen import SyntheticSpec, generate
from .pipeline import GitConfig, run_git

SWEEPS = ("n", "dim", "k")
DEFAULTS = {"n": 10_000, "dim": 10, "k": 50}


def two_gaussians(n, dims, seed=0, separation=4.0):
    """Balanced mixture of two unit-variance Gaussians ``separation`` apart."""
    centers = ((0.0,) * dims, (separation,) + (0.0,) * (dims - 1))
    spec = SyntheticSpec("blobs", n, seed=seed, blob_centers=centers, blob_std=1.0)
    return generate(spec)


def machine_note():
    return f"{platform.platform()}; {platform.processor() or platform.machine()}; {os.cpu_count()} cpus; python {platform.python_version()}"


def time_run(n, dims, k, repeat=1, seed=0):
    """Median wall time of ``run_git`` over ``repeat`` runs."""
    ds, _ = two_gaussians(n, dims, seed)
    config = GitConfig(k=k, prior=2, low_memory=True)
    times = []
    for _ in range(repeat):
        t0 = perf_counter()
        run_git(ds, config)
        times.append(perf_counter() - t0)
    return statistics.median(times)


def run_bench(sweep, points, repeat=1, seed=0, **fixed):
    """One row per grid value of the swept axis, sorted by that axis.

    ``fixed`` may override the non-swept defaults (``n``, ``dim``, ``k``).
    """
    if sweep not in SWEEPS:
        raise ValueError(f"unknown sweep {sweep!r}; expected one of {SWEEPS}")
    if repeat < 1:
        raise ValueError("repeat must be >= 1")
    base = {**DEFAULTS, **fixed}
    note = machine_note()
    rows = []
    for value in sorted(int(v) for v in points):
        cfg = {**base, sweep: value}
        secs = time_run(cfg["n"], cfg["dim"], cfg["k"], repeat, seed)
        rows.append({"n": cfg["n"], "dims": cfg["dim"], "k": cfg["k"], "seconds": secs, "machine": note})
    return rows
