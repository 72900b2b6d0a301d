"""Shared test construction helpers."""

from __future__ import annotations

from corefmine.pipeline.tokenize import span_to_token_range, tokenize
from corefmine.pipeline.types import Mention


def make_mention(mention_id: int, paragraph: str, anchor: str,
                 cluster_id: int = 0, source_title: str = "Source",
                 target_title: str = "Target", occurrence: int = 1,
                 metadata: dict | None = None) -> Mention:
    """Build a mention by locating the nth occurrence of ``anchor`` in text."""
    start = -1
    for _ in range(occurrence):
        start = paragraph.index(anchor, start + 1)
    end = start + len(anchor)
    tokens = tokenize(paragraph)
    token_range = span_to_token_range(tokens, start, end)
    assert token_range is not None, f"anchor {anchor!r} matches no token"
    first, last = token_range
    return Mention(
        mention_id=mention_id,
        tokens=tuple(t.text for t in tokens),
        span=(first, last),
        mention_text=paragraph[tokens[first].start:tokens[last].end],
        source_title=source_title,
        target_title=target_title,
        cluster_id=cluster_id,
        metadata=metadata or {},
        paragraph_index=0,
        char_span=(start, end),
    )
