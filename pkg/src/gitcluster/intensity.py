"""Per-point intensity: mean exponentially decayed distance to the k neighbours."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class IntensityField:
    values: np.ndarray
    order: np.ndarray  # descending intensity, ties by ascending index

    @property
    def rank(self):
        """Position of every point in the growth order."""
        r = np.empty_like(self.order)
        r[self.order] = np.arange(self.order.size)
        return r


def growth_order(values):
    values = np.asarray(values)
    return np.lexsort((np.arange(values.size), -values))


def compute_intensity(dataset, graph):
    if graph.n != dataset.n:
        raise ValueError(f"graph has {graph.n} points but dataset has {dataset.n}")
    if graph.width == 0:
        # a lone point: empty neighbourhood, treat as maximal intensity
        values = np.ones(dataset.n)
    else:
        values = np.exp(-graph.distances).mean(axis=1)
    values.setflags(write=False)
    order = growth_order(values)
    order.setflags(write=False)
    return IntensityField(values, order)
