"""Streaming reader for MediaWiki pages-articles export markup.

Pages are yielded one at a time via ``iterparse``; the element tree root is
cleared after every page so memory stays flat regardless of dump size.
Decompression is the caller's concern; ``open_dump`` is the documented
wrapper for ``.bz2``/``.gz`` files.
"""

from __future__ import annotations

import bz2
import gzip
import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

log = logging.getLogger("corefmine.wikitext")

_REDIRECT = re.compile(r"\s*#redirect\s*:?\s*\[\[([^\]|]+)(?:\|[^\]]*)?\]\]",
                       re.IGNORECASE)


def normalize_title(title: str) -> str:
    """Canonical page title: underscores to spaces, whitespace collapsed,
    section anchor dropped, first letter uppercased."""
    t = title.replace("_", " ")
    t = t.split("#", 1)[0]
    t = " ".join(t.split())
    if not t:
        return ""
    return t[0].upper() + t[1:]


def redirect_directive(wikitext: str) -> str | None:
    """Target title when the wikitext begins with a redirect directive."""
    m = _REDIRECT.match(wikitext or "")
    if not m:
        return None
    target = normalize_title(m.group(1))
    return target or None


@dataclass(frozen=True)
class RawPage:
    page_id: int
    title: str
    namespace: int
    redirect_target: str | None
    wikitext: str

    def __post_init__(self):
        if self.page_id < 0:
            raise ValueError("page_id must be >= 0")
        if not self.title or "_" in self.title:
            raise ValueError(f"title not normalized: {self.title!r}")

    @property
    def is_redirect(self) -> bool:
        return self.redirect_target is not None


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def open_dump(path) -> IO[bytes]:
    """Open a dump file, transparently decompressing .bz2 / .gz."""
    path = Path(path)
    if path.suffix == ".bz2":
        return bz2.open(path, "rb")
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


class DumpReader:
    """Iterate RawPages out of an export stream; constant memory per page.

    Malformed page elements are skipped with a diagnostic and counted in
    ``skipped``.  A truncated stream raises once after every complete page
    has been yielded.
    """

    def __init__(self, source, namespaces: Iterable[int] | None = None):
        self._source = source
        self._namespaces = set(namespaces) if namespaces is not None else None
        self.skipped = 0
        self.yielded = 0

    def __iter__(self) -> Iterator[RawPage]:
        stream = self._source
        owns = False
        if isinstance(stream, (str, Path)):
            stream = open_dump(stream)
            owns = True
        try:
            root = None
            for event, elem in ET.iterparse(stream, events=("start", "end")):
                if event == "start":
                    if root is None:
                        root = elem
                    continue
                if _local(elem.tag) != "page":
                    continue
                page = self._build_page(elem)
                if root is not None:
                    root.clear()
                if page is None:
                    continue
                if self._namespaces is not None and page.namespace not in self._namespaces:
                    continue
                self.yielded += 1
                yield page
        finally:
            if owns:
                stream.close()

    def _build_page(self, elem) -> RawPage | None:
        title = None
        page_id = None
        namespace = 0
        wikitext = ""
        for child in elem:
            tag = _local(child.tag)
            if tag == "title":
                title = child.text or ""
            elif tag == "ns":
                try:
                    namespace = int(child.text or 0)
                except ValueError:
                    namespace = 0
            elif tag == "id" and page_id is None:
                try:
                    page_id = int(child.text or "")
                except ValueError:
                    page_id = None
            elif tag == "revision":
                for sub in child:
                    if _local(sub.tag) == "text":
                        wikitext = sub.text or ""
        title = normalize_title(title or "")
        if not title or page_id is None:
            self.skipped += 1
            log.warning("skipping malformed page element (title=%r, id=%r)",
                        title, page_id)
            return None
        return RawPage(page_id=page_id, title=title, namespace=namespace,
                       redirect_target=redirect_directive(wikitext),
                       wikitext=wikitext)


def parse_dump(source, namespaces: Iterable[int] | None = None) -> Iterator[RawPage]:
    """Convenience generator over ``DumpReader``."""
    return iter(DumpReader(source, namespaces))
