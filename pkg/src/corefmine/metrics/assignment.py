"""Optimal one-to-one assignment used by the entity-alignment metric."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment


def solve_assignment(similarity: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Maximize the total similarity of an injective row->column assignment.

    Accepts rectangular matrices; unmatched rows/columns contribute nothing.
    Returns (row_indices, col_indices, total).  Ties between equally good
    assignments are resolved by the solver deterministically; the total is
    what the metrics consume, so tie identity does not affect scores.
    """
    similarity = np.asarray(similarity, dtype=float)
    if similarity.size == 0:
        return np.empty(0, dtype=int), np.empty(0, dtype=int), 0.0
    rows, cols = linear_sum_assignment(similarity, maximize=True)
    total = float(similarity[rows, cols].sum())
    return rows, cols, total
