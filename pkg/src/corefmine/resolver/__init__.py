from .agglomerative import (ClusteringConfig, MergeTrajectory, agglomerate,
                            merge_trajectory, partition_restricted_clustering)
from .baseline import lemma_baseline
from .scorematrix import ScoreMatrix, read_scores, write_scores
from .tuning import default_grid, tune_threshold

__all__ = [
    "ClusteringConfig", "MergeTrajectory", "agglomerate", "merge_trajectory",
    "partition_restricted_clustering", "lemma_baseline", "ScoreMatrix",
    "read_scores", "write_scores", "default_grid", "tune_threshold",
]
