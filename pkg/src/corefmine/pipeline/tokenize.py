"""Deterministic, language-portable tokenization.

Words are maximal runs of word characters; every punctuation character is
its own token.  Offsets into the source text ride along so anchor character
spans can be aligned to token spans.
"""

from __future__ import annotations

import re
from typing import NamedTuple

_TOKEN = re.compile(r"\w+|[^\w\s]", re.UNICODE)


class Token(NamedTuple):
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    return [Token(m.group(), m.start(), m.end()) for m in _TOKEN.finditer(text)]


def span_to_token_range(tokens: list[Token], char_start: int,
                        char_end: int) -> tuple[int, int] | None:
    """Inclusive (first, last) token indices overlapping [char_start, char_end).

    None when the span covers no token at all.
    """
    first = last = None
    for i, tok in enumerate(tokens):
        if tok.end <= char_start:
            continue
        if tok.start >= char_end:
            break
        if first is None:
            first = i
        last = i
    if first is None or last is None:
        return None
    return first, last
