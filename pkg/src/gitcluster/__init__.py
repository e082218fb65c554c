"""Clustering by intensity growth over local clusters and prior-guided edge filtering."""

from .dataset import DataError, Dataset, load_csv, save_csv
from .edge_filter import PriorError, PriorProportion, auto_filter, proportion_score
from .metrics import evaluate
from .pipeline import GitConfig, GitResult, StageError, run_git
from .topograph import export_graph

__all__ = [
    "DataError",
    "Dataset",
    "GitConfig",
    "GitResult",
    "PriorError",
    "PriorProportion",
    "StageError",
    "auto_filter",
    "evaluate",
    "export_graph",
    "load_csv",
    "proportion_score",
    "run_git",
    "save_csv",
]

__version__ = "0.1.0"
