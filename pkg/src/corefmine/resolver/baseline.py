"""The same-head-lemma clustering baseline."""

from __future__ import annotations

from typing import Iterable

from ..metrics.partition import Clustering, Partition
from ..pipeline.types import Mention
from ..stats import LemmaResource, head_lemma


def lemma_baseline(mentions: Iterable[Mention],
                   lemmas: LemmaResource | None = None) -> Clustering:
    """Cluster mentions whose spans share the same head lemma."""
    lemmas = lemmas or LemmaResource()
    groups: dict[str, set[int]] = {}
    for m in mentions:
        groups.setdefault(head_lemma(m, lemmas), set()).add(m.mention_id)
    partition = Partition.of(groups[k] for k in sorted(groups))
    return Clustering(partition, {"method": "lemma_baseline"})
