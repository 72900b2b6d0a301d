"""Coreference evaluation: MUC, B-cubed, entity CEAF and their average.

All three metrics run over gold mentions in the meta-document view: mention
ids are corpus-global and a response must cover exactly the key's mention
universe.  Degenerate denominators (a key with no links, an empty response)
never raise; they score zero and set the ``degenerate`` flag so batch
evaluation can proceed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assignment import solve_assignment
from .partition import Partition


@dataclass(frozen=True)
class MetricScore:
    recall: float
    precision: float
    f1: float
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {"recall": self.recall, "precision": self.precision,
                "f1": self.f1, "degenerate": self.degenerate}


@dataclass(frozen=True)
class EvalReport:
    muc: MetricScore
    b_cubed: MetricScore
    ceaf_e: MetricScore
    conll_f1: float

    def to_dict(self) -> dict:
        return {"muc": self.muc.to_dict(), "b_cubed": self.b_cubed.to_dict(),
                "ceaf_e": self.ceaf_e.to_dict(), "conll_f1": self.conll_f1}


def _f1(precision: float, recall: float) -> float:
    if precision + recall > 0:
        return 2 * precision * recall / (precision + recall)
    return 0.0


def _score(r_num: float, r_den: float, p_num: float, p_den: float) -> MetricScore:
    degenerate = r_den == 0 or p_den == 0
    recall = r_num / r_den if r_den else 0.0
    precision = p_num / p_den if p_den else 0.0
    return MetricScore(recall, precision, _f1(precision, recall), degenerate)


def muc(key: Partition, response: Partition) -> MetricScore:
    """Link-based metric: correct links over minimum spanning links."""

    def half(a: Partition, b: Partition) -> tuple[int, int]:
        b_index = b.index()
        num = den = 0
        for cluster in a.clusters:
            # members absent from b each form their own partition
            parts = {b_index.get(m, ("solo", m)) for m in cluster}
            num += len(cluster) - len(parts)
            den += len(cluster) - 1
        return num, den

    r_num, r_den = half(key, response)
    p_num, p_den = half(response, key)
    return _score(r_num, r_den, p_num, p_den)


def b_cubed(key: Partition, response: Partition) -> MetricScore:
    """Mention-based metric averaging per-mention cluster overlap."""

    def half(a: Partition, b: Partition) -> tuple[float, int]:
        b_index = b.index()
        total = 0.0
        count = 0
        for cluster in a.clusters:
            for m in cluster:
                other = b_index.get(m, frozenset())
                total += len(cluster & other) / len(cluster)
                count += 1
        return total, count

    r_num, r_den = half(key, response)
    p_num, p_den = half(response, key)
    return _score(r_num, r_den, p_num, p_den)


def ceaf_e(key: Partition, response: Partition) -> MetricScore:
    """Entity-based metric over an optimal one-to-one cluster alignment.

    Cluster similarity is 2*|k&r| / (|k|+|r|); the alignment maximizing the
    total similarity is found with an optimal assignment solver.
    """
    if not key.clusters or not response.clusters:
        return MetricScore(0.0, 0.0, 0.0, degenerate=True)
    sim = np.zeros((len(key.clusters), len(response.clusters)))
    for i, k in enumerate(key.clusters):
        for j, r in enumerate(response.clusters):
            inter = len(k & r)
            if inter:
                sim[i, j] = 2 * inter / (len(k) + len(r))
    _, _, total = solve_assignment(sim)
    return _score(total, len(key.clusters), total, len(response.clusters))


def conll_f1(muc_score: MetricScore, b_cubed_score: MetricScore,
             ceaf_e_score: MetricScore) -> float:
    """Arithmetic mean of the three F1 values."""
    return (muc_score.f1 + b_cubed_score.f1 + ceaf_e_score.f1) / 3


def evaluate(key: Partition, response: Partition) -> EvalReport:
    """Score a response clustering against the key over gold mentions.

    The two partitions must cover the same mention universe; anything else
    violates the gold-mention contract and raises.
    """
    if key.mentions != response.mentions:
        missing = sorted(key.mentions - response.mentions, key=repr)[:5]
        extra = sorted(response.mentions - key.mentions, key=repr)[:5]
        raise ValueError(
            "key and response cover different mentions "
            f"(missing from response: {missing}, unknown to key: {extra})")
    m = muc(key, response)
    b = b_cubed(key, response)
    c = ceaf_e(key, response)
    return EvalReport(m, b, c, conll_f1(m, b, c))


def percent(x: float) -> str:
    """Score fraction -> percentage with one decimal, as reported in tables."""
    return f"{x * 100:.1f}"


def format_table(reports: dict[str, EvalReport]) -> str:
    """Render reports in the usual results-table layout (one system per row)."""
    header = (f"{'':24s}  {'MUC':^17s}  {'B3':^17s}  {'CEAF-e':^17s}  CoNLL\n"
              f"{'':24s}  {'R':>5s} {'P':>5s} {'F1':>5s}  "
              f"{'R':>5s} {'P':>5s} {'F1':>5s}  "
              f"{'R':>5s} {'P':>5s} {'F1':>5s}  {'F1':>5s}")
    lines = [header]
    for name, rep in reports.items():
        cells = []
        for s in (rep.muc, rep.b_cubed, rep.ceaf_e):
            cells.append(f"{percent(s.recall):>5s} {percent(s.precision):>5s} "
                         f"{percent(s.f1):>5s}")
        lines.append(f"{name[:24]:24s}  " + "  ".join(cells)
                     + f"  {percent(rep.conll_f1):>5s}")
    return "\n".join(lines)
