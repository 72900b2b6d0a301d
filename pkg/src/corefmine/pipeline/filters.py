"""Mention-level filtering stages.

Every stage only removes mentions and reports what it removed, so pipeline
counts are monotonically non-increasing.
"""

from __future__ import annotations

import logging
import re
from typing import Iterable

from ..stats import normalize_string
from .types import CoreferenceChain, Mention, NerAnnotation

log = logging.getLogger("corefmine.pipeline")

BLOCKED_NER_LABELS = frozenset({"PERSON", "GPE", "LOC", "DATE", "NORP"})
NER_COVERAGE_THRESHOLD = 0.5
MIN_CONTEXT_TOKENS = 5

# symptoms of markup junk surviving in a context paragraph; whitespace-tolerant
# because they are matched against space-joined tokens
BOILERPLATE_CODE_PATTERNS = (
    r"<\s*[a-zA-Z!/][^>]*>",
    r"\"[^\"]+\"\s*:",
    r"\{\s*[{|]",
    r"\}\s*\}",
)


def filter_context(mentions: Iterable[Mention],
                   min_context_tokens: int = MIN_CONTEXT_TOKENS,
                   code_patterns: tuple[str, ...] = BOILERPLATE_CODE_PATTERNS,
                   ) -> tuple[list[Mention], list[Mention]]:
    """Drop mentions that lack context or whose paragraph looks like code.

    A mention lacks context when fewer than ``min_context_tokens`` tokens of
    its paragraph fall outside the mention span.
    """
    compiled = [re.compile(p) for p in code_patterns]
    kept, removed = [], []
    for m in mentions:
        first, last = m.span
        outside = len(m.tokens) - (last - first + 1)
        paragraph = " ".join(m.tokens)
        if outside < min_context_tokens or any(p.search(paragraph) for p in compiled):
            removed.append(m)
        else:
            kept.append(m)
    return kept, removed


def filter_by_ner(mentions: Iterable[Mention], ner: NerAnnotation,
                  blocked: frozenset[str] = BLOCKED_NER_LABELS,
                  threshold: float = NER_COVERAGE_THRESHOLD,
                  ) -> tuple[list[Mention], list[Mention]]:
    """Drop mentions majority-covered by a blocked named-entity span.

    Coverage is per annotation span: one blocked span must cover at least
    ``threshold`` of the mention's character span.
    """
    mentions = list(mentions)
    known = {m.source_title for m in mentions}
    for title in sorted(ner.titles() - known):
        log.warning("NE annotations reference unknown document %r; ignored", title)
    kept, removed = [], []
    for m in mentions:
        if m.char_span is None or m.paragraph_index is None:
            raise ValueError(
                f"mention {m.mention_id} lacks extraction-time offsets; "
                "NE filtering runs inside the pipeline only")
        start, end = m.char_span
        width = end - start
        hit = False
        for s, e, label in ner.spans_for(m.source_title, m.paragraph_index):
            if label not in blocked:
                continue
            overlap = min(end, e) - max(start, s)
            if overlap > 0 and overlap / width >= threshold:
                hit = True
                break
        (removed if hit else kept).append(m)
    return kept, removed


def control_diversity(chains: Iterable[CoreferenceChain],
                      max_identical: int = 4) -> tuple[list[CoreferenceChain], int]:
    """Cap identical normalized mention strings per cluster.

    Survivors are the first ``max_identical`` occurrences in the mentions'
    existing (deterministic) order.  Returns the capped chains and the
    number of removed mentions.
    """
    if max_identical < 1:
        raise ValueError("max_identical must be >= 1")
    capped: list[CoreferenceChain] = []
    removed = 0
    for chain in chains:
        counts: dict[str, int] = {}
        survivors = []
        for m in chain.mentions:
            key = normalize_string(m.mention_text)
            counts[key] = counts.get(key, 0) + 1
            if counts[key] <= max_identical:
                survivors.append(m)
            else:
                removed += 1
        capped.append(CoreferenceChain(chain.cluster_id, chain.pivot_title,
                                       survivors))
    return capped, removed
