"""Redirect resolution: map redirect titles to their final targets."""

from __future__ import annotations

import logging
from typing import Iterable

from .dump import RawPage

log = logging.getLogger("corefmine.wikitext")

MAX_REDIRECT_DEPTH = 8


def resolve_redirects(pages: Iterable[RawPage],
                      max_depth: int = MAX_REDIRECT_DEPTH) -> dict[str, str]:
    """Map every redirect title to its final non-redirect target.

    Chains are followed up to ``max_depth`` hops; titles on a cycle, or whose
    chain is still a redirect at the cap, are left out of the map (and
    logged).  Targets absent from the input are assumed to be articles.
    """
    hops: dict[str, str] = {}
    for page in pages:
        if page.redirect_target:
            hops[page.title] = page.redirect_target

    resolved: dict[str, str] = {}
    for start in sorted(hops):
        seen = {start}
        cur = start
        target = None
        for _ in range(max_depth):
            cur = hops[cur]
            if cur in seen:
                log.warning("redirect cycle through %r; excluding", start)
                break
            seen.add(cur)
            if cur not in hops:
                target = cur
                break
        else:
            log.warning("redirect chain from %r exceeds depth %d; excluding",
                        start, max_depth)
        if target is not None:
            resolved[start] = target
    return resolved
