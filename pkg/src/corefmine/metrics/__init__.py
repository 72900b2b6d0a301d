from .partition import Clustering, Partition, read_clustering, write_clustering
from .scores import (EvalReport, MetricScore, b_cubed, ceaf_e, conll_f1,
                     evaluate, format_table, muc, percent)
from .assignment import solve_assignment
from .conll_io import read_conll, write_conll_pair

__all__ = [
    "Clustering", "Partition", "read_clustering", "write_clustering",
    "EvalReport", "MetricScore", "b_cubed", "ceaf_e", "conll_f1", "evaluate",
    "format_table", "muc", "percent", "solve_assignment", "read_conll",
    "write_conll_pair",
]
