"""End-to-end run: neighbours, intensity, growth, topo-graph, edge filtering."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .edge_filter import MergePlan, PriorProportion, auto_filter
from .intensity import compute_intensity
from .local_clusters import grow
from .neighbors import build_neighbor_graph
from .topograph import WEIGHT_MODES, TopoGraph, build_topograph


class StageError(RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class GitConfig:
    k: int = 20
    prior: PriorProportion | int = 2
    weight_mode: str = "pairwise_exp"
    low_memory: bool = False

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.prior, PriorProportion):
            object.__setattr__(self, "prior", PriorProportion.uniform(self.prior))
        if self.weight_mode not in WEIGHT_MODES:
            raise ValueError(f"unknown weight mode {self.weight_mode!r}")


@dataclass
class GitResult:
    labels: np.ndarray
    local_cluster_of: np.ndarray
    intensities: np.ndarray | None
    topograph: TopoGraph
    merge_plan: MergePlan
    timings: dict = field(default_factory=dict)
    growth: object = field(default=None, repr=False)
    neighbors: object = field(default=None, repr=False)

    @property
    def n_clusters(self):
        return int(np.unique(self.labels).size)


def run_git(dataset, config=None, **overrides):
    """Cluster ``dataset``; keyword overrides build a :class:`GitConfig` on the fly."""
    if config is None:
        config = GitConfig(**overrides)
    elif overrides:
        raise TypeError("pass either a config or keyword overrides, not both")

    timings = {}

    def stage(name, fn, *args):
        t0 = time.perf_counter()
        try:
            out = fn(*args)
        except (ValueError, IndexError, MemoryError) as exc:
            raise StageError(name, exc) from exc
        timings[name] = max(time.perf_counter() - t0, 1e-9)
        return out

    n = dataset.n
    graph = stage("neighbors", build_neighbor_graph, dataset, config.k)
    field_ = stage("intensity", compute_intensity, dataset, graph)
    state = stage("local_clusters", grow, dataset, graph, field_)
    topo = stage("topograph", build_topograph, state, dataset, field_, config.weight_mode)
    prior = config.prior
    if prior.c > topo.n_nodes:
        raise StageError(
            "edge_filter",
            f"prior asks for {prior.c} classes but only {topo.n_nodes} local clusters were found",
        )
    plan = stage("edge_filter", auto_filter, topo, prior, n, state.root)

    keep = not config.low_memory
    return GitResult(
        labels=plan.labels,
        local_cluster_of=np.asarray(state.root),
        intensities=np.asarray(field_.values) if keep else None,
        topograph=topo,
        merge_plan=plan,
        timings=timings,
        growth=state if keep else None,
        neighbors=graph if keep else None,
    )
