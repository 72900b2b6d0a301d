"""Newline-delimited record IO and config-file loading for the pipeline."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable, Iterator

from ..wikitext.textparse import ParsedPage
from .types import Mention, NerAnnotation

log = logging.getLogger("corefmine.pipeline")


def dump_record(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"))


def write_records(path, records: Iterable[dict]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(dump_record(rec) + "\n")
            count += 1
    return count


def read_records(path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                yield json.loads(line)


def write_mentions(path, mentions: Iterable[Mention]) -> int:
    return write_records(path, (m.to_record() for m in mentions))


def read_mentions(path) -> list[Mention]:
    return [Mention.from_record(rec) for rec in read_records(path)]


def write_parsed_pages(path, pages: Iterable[ParsedPage]) -> int:
    return write_records(path, (p.to_record() for p in pages))


def read_parsed_pages(path) -> Iterator[ParsedPage]:
    return (ParsedPage.from_record(rec) for rec in read_records(path))


def read_allowlist(path) -> set[str]:
    """One infobox type per line, lowercased; ``#`` starts a comment."""
    types = set()
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if line:
                types.add(" ".join(line.lower().split()))
    return types


def read_ner(path) -> NerAnnotation:
    annotations = NerAnnotation()
    for rec in read_records(path):
        annotations.add(rec["source_title"], rec["paragraph_index"],
                        rec["char_start"], rec["char_end"], rec["label"])
    return annotations


def title_to_url(title: str, base: str = "https://en.wikipedia.org/wiki/") -> str:
    from urllib.parse import quote
    return base + quote(title.replace(" ", "_"), safe="()_,.-~!$&'*+:;=@/")
