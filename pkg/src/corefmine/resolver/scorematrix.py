"""Pairwise coreference-likelihood matrices and their file format."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOLERANCE = 1e-9


@dataclass
class ScoreMatrix:
    """Dense symmetric matrix of pairwise scores over an ordered id list.

    The diagonal is unused.  Scores are likelihoods in [0, 1]; pairs absent
    from a sparse input file default to ``default_score`` (recorded so the
    choice shows up in clustering provenance).
    """

    mention_ids: tuple[int, ...]
    scores: np.ndarray
    default_score: float = 0.0

    def __post_init__(self):
        n = len(self.mention_ids)
        if len(set(self.mention_ids)) != n:
            raise ValueError("duplicate mention ids in score matrix")
        if self.scores.shape != (n, n):
            raise ValueError(f"matrix shape {self.scores.shape} != universe size {n}")
        if not np.all(np.isfinite(self.scores)):
            raise ValueError("score matrix contains non-finite values")
        off_diag = ~np.eye(n, dtype=bool)
        if n and (self.scores[off_diag].min(initial=0.0) < -1e-12
                  or self.scores[off_diag].max(initial=0.0) > 1 + 1e-12):
            raise ValueError("scores must lie in [0, 1]")
        asym = np.abs(self.scores - self.scores.T)
        if n and asym.max() > SYMMETRY_TOLERANCE:
            raise ValueError(f"matrix asymmetric by {asym.max():g}")

    def __len__(self) -> int:
        return len(self.mention_ids)

    def position(self, mention_id: int) -> int:
        try:
            return self.mention_ids.index(mention_id)
        except ValueError:
            raise KeyError(f"mention {mention_id} not in score matrix") from None

    def submatrix(self, mention_ids: list[int]) -> "ScoreMatrix":
        pos = [self.position(m) for m in mention_ids]
        sub = self.scores[np.ix_(pos, pos)].copy()
        return ScoreMatrix(tuple(mention_ids), sub, self.default_score)


def write_scores(path, matrix: ScoreMatrix) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write("mentions " + " ".join(str(m) for m in matrix.mention_ids) + "\n")
        n = len(matrix)
        for i in range(n):
            for j in range(i + 1, n):
                s = float(matrix.scores[i, j])
                if s != matrix.default_score:
                    f.write(f"{matrix.mention_ids[i]} {matrix.mention_ids[j]} {s!r}\n")


def read_scores(path, default_score: float = 0.0) -> ScoreMatrix:
    """Parse a score file: a universe header then ``id_a id_b score`` triples.

    Symmetric duplicates are allowed if they agree; contradictory values for
    the same pair are rejected.
    """
    ids: tuple[int, ...] | None = None
    matrix: np.ndarray | None = None
    seen: np.ndarray | None = None
    position: dict[int, int] = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if ids is None:
                head, _, rest = line.partition(" ")
                if head != "mentions":
                    raise ValueError(
                        f"{path}:{line_no}: expected 'mentions <id>...' header")
                ids = tuple(int(tok) for tok in rest.split())
                position = {m: i for i, m in enumerate(ids)}
                matrix = np.full((len(ids), len(ids)), default_score, dtype=float)
                np.fill_diagonal(matrix, 0.0)
                seen = np.zeros_like(matrix, dtype=bool)
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{line_no}: expected 'id_a id_b score'")
            a, b, value = int(parts[0]), int(parts[1]), float(parts[2])
            if a not in position or b not in position:
                raise ValueError(f"{path}:{line_no}: id outside the declared universe")
            if a == b:
                continue  # diagonal unused
            i, j = position[a], position[b]
            if seen[i, j] and abs(matrix[i, j] - value) > SYMMETRY_TOLERANCE:
                raise ValueError(
                    f"{path}:{line_no}: contradictory score for pair ({a}, {b}): "
                    f"{matrix[i, j]!r} vs {value!r}")
            matrix[i, j] = matrix[j, i] = value
            seen[i, j] = seen[j, i] = True
    if ids is None:
        raise ValueError(f"{path}: missing 'mentions' header")
    return ScoreMatrix(ids, matrix, default_score)
