"""Pivot collection and mention gathering over parsed pages."""

from __future__ import annotations

import logging
from typing import Iterable, Mapping

from ..wikitext.textparse import ParsedPage
from .records import title_to_url
from .tokenize import span_to_token_range, tokenize
from .types import EventRegistry, Mention, PivotEntry

log = logging.getLogger("corefmine.pipeline")


def collect_pivots(pages: Iterable[ParsedPage] | Iterable[tuple[str, str | None]],
                   allowlist: set[str]) -> EventRegistry:
    """Registry of pages whose infobox type is allowlisted.

    Accepts parsed pages or bare (title, infobox_type) pairs so the caller
    can skip full parsing on the pivot-identification pass.  Cluster ids are
    assigned densely in sorted-title order.
    """
    if not allowlist:
        raise ValueError("allowlist is empty")
    if any(t != t.lower() for t in allowlist):
        raise ValueError("allowlist entries must be lowercase")
    found: dict[str, str] = {}
    for page in pages:
        if isinstance(page, ParsedPage):
            title, infobox = page.title, page.infobox_type
        else:
            title, infobox = page
        if infobox is not None and infobox in allowlist:
            found[title] = infobox
    registry = EventRegistry()
    for cluster_id, title in enumerate(sorted(found)):
        registry.entries[title] = PivotEntry(cluster_id, found[title])
    return registry


def page_mention_candidates(page: ParsedPage, registry: EventRegistry,
                            redirects: Mapping[str, str] | None,
                            url_base: str = "https://en.wikipedia.org/wiki/") -> list[Mention]:
    """Mentions found on one page, with placeholder ids (pure per-page map).

    A link produces a mention when its paragraph is prose (not boilerplate),
    its redirect-resolved target is a pivot, and the page is not that pivot
    itself.
    """
    mentions = []
    token_cache: dict[int, list] = {}
    for link in page.links:
        paragraph = page.paragraphs[link.paragraph_index]
        if paragraph.is_boilerplate:
            continue
        target = link.target_title
        if redirects is not None:
            target = redirects.get(target, target)
        if target not in registry:
            continue
        if target == page.title:
            continue  # a page does not mention itself
        tokens = token_cache.get(link.paragraph_index)
        if tokens is None:
            tokens = tokenize(paragraph.text)
            token_cache[link.paragraph_index] = tokens
        start, end = link.anchor_char_span
        if not (0 <= start < end <= len(paragraph.text)):
            log.warning("link offset outside paragraph on %r; dropped", page.title)
            continue
        token_range = span_to_token_range(tokens, start, end)
        if token_range is None:
            log.warning("anchor %r aligns with no token on %r; dropped",
                        link.anchor_text, page.title)
            continue
        first, last = token_range
        entry = registry.entries[target]
        mentions.append(Mention(
            mention_id=-1,
            tokens=tuple(t.text for t in tokens),
            span=(first, last),
            mention_text=paragraph.text[tokens[first].start:tokens[last].end],
            source_title=page.title,
            target_title=target,
            cluster_id=entry.cluster_id,
            metadata={
                "source_url": title_to_url(page.title, url_base),
                "target_url": title_to_url(target, url_base),
                "infobox_type": entry.infobox_type,
            },
            paragraph_index=link.paragraph_index,
            char_span=(start, end),
        ))
    return mentions


def finalize_mentions(collected: list[Mention]) -> list[Mention]:
    """Sort into deterministic corpus order and assign dense ids.

    Order is (source title, paragraph, anchor offset), i.e. title-sorted then
    document order, which also fixes which duplicates survive the later
    diversity cap.
    """
    collected = sorted(collected,
                       key=lambda m: (m.source_title, m.paragraph_index, m.char_span))
    return [
        Mention(
            mention_id=i,
            tokens=m.tokens, span=m.span, mention_text=m.mention_text,
            source_title=m.source_title, target_title=m.target_title,
            cluster_id=m.cluster_id, metadata=m.metadata,
            paragraph_index=m.paragraph_index, char_span=m.char_span,
        )
        for i, m in enumerate(collected)
    ]


def collect_mentions(pages: Iterable[ParsedPage], registry: EventRegistry,
                     redirects: Mapping[str, str] | None,
                     url_base: str = "https://en.wikipedia.org/wiki/") -> list[Mention]:
    """All mentions in the corpus, in deterministic order with dense ids."""
    collected: list[Mention] = []
    for page in pages:
        collected.extend(page_mention_candidates(page, registry, redirects, url_base))
    return finalize_mentions(collected)
