"""Stop-threshold selection on a development set."""

from __future__ import annotations

from ..metrics.partition import Partition
from ..metrics.scores import evaluate
from .agglomerative import ClusteringConfig, agglomerate, merge_trajectory
from .scorematrix import ScoreMatrix


def default_grid(step: float = 0.05) -> list[float]:
    count = round(1 / step)
    return [round(i * step, 10) for i in range(count + 1)]


def tune_threshold(dev_key: Partition, dev_scores: ScoreMatrix,
                   grid: list[float] | None = None) -> float:
    """Grid value maximizing CoNLL F1 on the dev set; ties pick the smallest.

    The merge trajectory is computed once and cut at every candidate, which
    is equivalent to rerunning the clustering per threshold.
    """
    grid = grid if grid is not None else default_grid()
    if not grid:
        raise ValueError("threshold grid is empty")
    trajectory = merge_trajectory(dev_scores)
    best_tau = None
    best_f1 = -1.0
    for tau in sorted(grid):
        clustering = agglomerate(dev_scores, ClusteringConfig(threshold=tau),
                                 trajectory=trajectory)
        report = evaluate(dev_key, clustering.partition)
        if report.conll_f1 > best_f1:
            best_f1 = report.conll_f1
            best_tau = tau
    return best_tau
