"""Wikitext to plain paragraphs, internal links, and infobox types.

This is a distillation parser, not a renderer: templates, references and
comments are removed, tables / lists / headings / image captions survive as
boilerplate-flagged paragraphs, and prose comes out as blank-line-delimited
blocks with exact anchor offsets for every internal link.  Pathological
markup never raises; regions touched by unbalanced braces degrade to
boilerplate-flagged content with a logged diagnostic.
"""

from __future__ import annotations

import html
import logging
import re
from dataclasses import dataclass, field

from .dump import RawPage, normalize_title

log = logging.getLogger("corefmine.wikitext")

# elements whose entire content is dropped
_SUPPRESS_TAGS = ("ref", "references", "gallery", "math", "nowiki", "pre",
                  "source", "syntaxhighlight", "timeline", "score", "imagemap")
_TAG_OPEN = re.compile(r"<(%s)(?=[\s/>])([^<>]*?)(/?)>" % "|".join(_SUPPRESS_TAGS),
                       re.IGNORECASE)
_COMMENT = re.compile(r"<!--.*?(?:-->|$)", re.DOTALL)
_HTML_TAG = re.compile(r"</?([a-zA-Z][a-zA-Z0-9]*)\b[^<>]*?/?>")
_ENTITY = re.compile(r"&(?:[a-zA-Z][a-zA-Z0-9]{1,31}|#\d{1,7}|#x[0-9a-fA-F]{1,6});")
_MAGIC = re.compile(r"__[A-Z]+__")
_EXTERNAL = re.compile(r"\[(?:https?|ftp|news|irc|mailto):", re.IGNORECASE)
_HEADING = re.compile(r"^(=+)\s*(.*?)\s*(=+)\s*$")
_PAREN_SUFFIX = re.compile(r"\s*\([^()]*\)\s*$")
_MEDIA_KEYWORD = re.compile(
    r"(thumb|thumbnail|frame|framed|frameless|border|right|left|center|none"
    r"|baseline|middle|top|bottom|sub|super|upright(=[\d.]+)?|\d+px"
    r"|x\d+px|\d+x\d+px|alt=.*|link=.*|lang=.*|page=.*|class=.*)\s*$",
    re.IGNORECASE)

_MEDIA_NAMESPACES = ("file", "image", "media")


@dataclass(frozen=True)
class Paragraph:
    text: str
    char_span_in_source: tuple[int, int]
    is_boilerplate: bool


@dataclass(frozen=True)
class InternalLink:
    target_title: str
    anchor_text: str
    paragraph_index: int
    anchor_char_span: tuple[int, int]


@dataclass
class ParsedPage:
    page_id: int
    title: str
    infobox_type: str | None
    paragraphs: tuple[Paragraph, ...]
    links: tuple[InternalLink, ...]

    def __post_init__(self):
        for link in self.links:
            para = self.paragraphs[link.paragraph_index]
            start, end = link.anchor_char_span
            if para.text[start:end] != link.anchor_text:
                raise ValueError(
                    f"anchor offset mismatch on {self.title!r}: "
                    f"{para.text[start:end]!r} != {link.anchor_text!r}")

    def to_record(self) -> dict:
        return {
            "page_id": self.page_id,
            "title": self.title,
            "infobox_type": self.infobox_type,
            "paragraphs": [{"text": p.text,
                            "char_span_in_source": list(p.char_span_in_source),
                            "is_boilerplate": p.is_boilerplate}
                           for p in self.paragraphs],
            "links": [{"target_title": l.target_title,
                       "anchor_text": l.anchor_text,
                       "paragraph_index": l.paragraph_index,
                       "anchor_char_span": list(l.anchor_char_span)}
                      for l in self.links],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ParsedPage":
        return cls(
            page_id=rec["page_id"],
            title=rec["title"],
            infobox_type=rec.get("infobox_type"),
            paragraphs=tuple(Paragraph(p["text"], tuple(p["char_span_in_source"]),
                                       p["is_boilerplate"])
                             for p in rec["paragraphs"]),
            links=tuple(InternalLink(l["target_title"], l["anchor_text"],
                                     l["paragraph_index"], tuple(l["anchor_char_span"]))
                        for l in rec["links"]),
        )


# ---------------------------------------------------------------------------
# region scanning
# ---------------------------------------------------------------------------

@dataclass
class ScanResult:
    suppressed: list[tuple[int, int]] = field(default_factory=list)
    tables: list[tuple[int, int]] = field(default_factory=list)
    templates: list[tuple[int, int]] = field(default_factory=list)
    unclosed: list[tuple[int, int]] = field(default_factory=list)

    @property
    def unbalanced(self) -> bool:
        return bool(self.unclosed)


def _merge(spans: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for start, end in sorted(spans):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def _tag_spans(text: str, skip: list[tuple[int, int]]) -> list[tuple[int, int]]:
    spans = []
    for m in _TAG_OPEN.finditer(text):
        if any(s <= m.start() < e for s, e in skip):
            continue
        if m.group(3):  # self-closing
            spans.append((m.start(), m.end()))
            continue
        name = m.group(1).lower()
        close = re.compile(r"</%s\s*>" % name, re.IGNORECASE)
        cm = close.search(text, m.end())
        if cm:
            spans.append((m.start(), cm.end()))
        else:
            # unterminated: drop to end of line to stay local
            eol = text.find("\n", m.end())
            spans.append((m.start(), len(text) if eol == -1 else eol))
    return spans


def scan_regions(text: str) -> ScanResult:
    comments = [(m.start(), m.end()) for m in _COMMENT.finditer(text)]
    tags = _tag_spans(text, comments)
    skips = _merge(comments + tags)

    templates: list[tuple[int, int]] = []
    tables: list[tuple[int, int]] = []
    unclosed: list[tuple[int, int]] = []
    stack: list[tuple[str, int]] = []
    i, n, si = 0, len(text), 0
    while i < n:
        while si < len(skips) and skips[si][1] <= i:
            si += 1
        if si < len(skips) and skips[si][0] <= i:
            i = skips[si][1]
            continue
        pair = text[i:i + 2]
        if pair == "{{":
            stack.append(("template", i))
            i += 2
        elif pair == "{|":
            stack.append(("table", i))
            i += 2
        elif pair == "}}" and stack and stack[-1][0] == "template":
            _, start = stack.pop()
            templates.append((start, i + 2))
            i += 2
        elif pair == "|}" and stack and stack[-1][0] == "table":
            _, start = stack.pop()
            tables.append((start, i + 2))
            i += 2
        else:
            i += 1
    for kind, start in stack:
        unclosed.append((start, n))
        if kind == "template":
            templates.append((start, n))
        else:
            tables.append((start, n))
    templates.sort()
    tables.sort()
    suppressed = _merge(comments + tags + templates)
    visible_tables = [t for t in tables
                      if not any(s <= t[0] < e for s, e in suppressed)]
    return ScanResult(suppressed, visible_tables, templates, unclosed)


def extract_infobox_type(wikitext: str) -> str | None:
    """Type token of the first template named ``Infobox ...`` on the page.

    The scan tracks balanced braces, so templates nested in field values do
    not end the search early; unbalanced markup degrades to a best-effort
    scan over whatever was found before the imbalance.
    """
    scan = scan_regions(wikitext)
    if scan.unbalanced:
        log.warning("unbalanced braces while scanning for an infobox")
    for start, end in scan.templates:
        inner = wikitext[start + 2:end]
        cut = len(inner)
        for stop in ("|", "}}"):
            pos = inner.find(stop)
            if pos != -1:
                cut = min(cut, pos)
        name = " ".join(inner[:cut].replace("_", " ").split())
        if name.lower().startswith("infobox"):
            token = " ".join(name[len("infobox"):].split()).lower()
            if token:
                return token
    return None


# ---------------------------------------------------------------------------
# block segmentation
# ---------------------------------------------------------------------------

_PROSE, _LIST, _TABLE, _HEAD, _MEDIA, _BLANK = range(6)


def _visible(text: str, start: int, end: int,
             suppressed: list[tuple[int, int]]) -> str:
    parts = []
    pos = start
    for s, e in suppressed:
        if e <= start:
            continue
        if s >= end:
            break
        if s > pos:
            parts.append(text[pos:s])
        pos = max(pos, e)
    if pos < end:
        parts.append(text[pos:end])
    return "".join(parts)


def _line_category(text: str, start: int, end: int, scan: ScanResult) -> int:
    in_table = any(s <= start < e or start <= s < end for s, e in scan.tables)
    if in_table:
        return _TABLE
    visible = _visible(text, start, end, scan.suppressed)
    stripped = visible.strip()
    if not stripped:
        return _BLANK
    if stripped[0] in "*#:;":
        return _LIST
    if _HEADING.match(stripped):
        return _HEAD
    lower = stripped.lower()
    if any(lower.startswith(f"[[{ns}:") for ns in _MEDIA_NAMESPACES):
        return _MEDIA
    return _PROSE


def _blocks(text: str, scan: ScanResult) -> list[tuple[int, int, int]]:
    """(category, start, end) spans of paragraph blocks."""
    blocks: list[tuple[int, int, int]] = []
    offset = 0
    current: tuple[int, int, int] | None = None
    for line in text.split("\n"):
        start, end = offset, offset + len(line)
        offset = end + 1
        category = _line_category(text, start, end, scan)
        if category == _BLANK:
            if current:
                blocks.append(current)
                current = None
            continue
        if current and current[0] == category and category != _HEAD:
            current = (category, current[1], end)
        else:
            if current:
                blocks.append(current)
            current = (category, start, end)
    if current:
        blocks.append(current)
    return blocks


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

class _Emitter:
    """Accumulates plain text, collapsing whitespace runs to single spaces."""

    def __init__(self):
        self.chars: list[str] = []

    @property
    def pos(self) -> int:
        return len(self.chars)

    def emit(self, s: str) -> None:
        for ch in s:
            if ch.isspace():
                if self.chars and self.chars[-1] != " ":
                    self.chars.append(" ")
            else:
                self.chars.append(ch)

    def text(self) -> str:
        return "".join(self.chars).rstrip()


def _pick_caption(parts: list[str]) -> str | None:
    """Last segment of a media construct that is not a display keyword."""
    for part in reversed(parts[1:]):
        if not _MEDIA_KEYWORD.fullmatch(part.strip()):
            return part
    return None


class _BlockRenderer:
    def __init__(self, text: str, scan: ScanResult, category: int = _PROSE):
        self.text = text
        self.suppressed = scan.suppressed
        self.category = category
        self.out = _Emitter()
        self.links: list[tuple[str, int, int]] = []  # target, start, end

    def _skip_suppressed(self, i: int) -> int | None:
        for s, e in self.suppressed:
            if s <= i < e:
                return e
            if s > i:
                break
        return None

    def render(self, start: int, end: int) -> None:
        text = self.text
        category = self.category
        i = start
        at_line_start = True
        while i < end:
            jump = self._skip_suppressed(i)
            if jump is not None:
                i = min(jump, end)
                continue
            if at_line_start:
                i = self._line_prefix(i, end)
                at_line_start = False
                continue
            ch = text[i]
            if ch == "\n":
                self.out.emit(" ")
                i += 1
                at_line_start = True
                continue
            pair = text[i:i + 2]
            if pair == "[[":
                i = self._internal_link(i, end)
                continue
            if ch == "[":
                if _EXTERNAL.match(text, i):
                    i = self._external_link(i, end)
                    continue
                self.out.emit(ch)
                i += 1
                continue
            if pair == "''":
                j = i
                while j < end and text[j] == "'":
                    j += 1
                if j - i >= 2:
                    i = j
                    continue
            if ch == "<":
                m = _HTML_TAG.match(text, i)
                if m:
                    if m.group(1).lower() in ("br", "hr"):
                        self.out.emit(" ")
                    i = m.end()
                    continue
                self.out.emit(ch)
                i += 1
                continue
            if ch == "&":
                m = _ENTITY.match(text, i)
                if m:
                    self.out.emit(html.unescape(m.group()))
                    i = m.end()
                    continue
            if ch == "_":
                m = _MAGIC.match(text, i)
                if m:
                    i = m.end()
                    continue
            if category == _TABLE and pair in ("||", "!!"):
                self.out.emit(" ")
                i += 2
                continue
            self.out.emit(ch)
            i += 1

    def _line_prefix(self, i: int, end: int) -> int:
        """Consume list bullets / table markup / heading fences at line start."""
        text = self.text
        j = i
        while j < end and text[j] in " \t":
            j += 1
        if self.category == _LIST:
            while j < end and text[j] in "*#:;":
                j += 1
            return j
        if self.category == _TABLE:
            rest = text[j:j + 2]
            if rest in ("{|", "|}", "|-"):
                eol = text.find("\n", j)
                return end if eol == -1 else min(eol, end)
            if rest[:1] in ("|", "!"):
                j += 1
                if j < end and text[j] == "+":
                    j += 1
                return j
            return j
        if self.category == _HEAD:
            while j < end and text[j] == "=":
                j += 1
            k = end
            while k > j and text[k - 1] in "= \t":
                k -= 1
            saved, self.category = self.category, _PROSE
            self.render(j, k)
            self.category = saved
            return end
        return j

    def _matching_brackets(self, i: int, end: int) -> int:
        """Index just past the ']]' matching the '[[' at i, or -1."""
        depth = 0
        j = i
        while j < end - 1:
            pair = self.text[j:j + 2]
            if pair == "[[":
                depth += 1
                j += 2
            elif pair == "]]":
                depth -= 1
                j += 2
                if depth == 0:
                    return j
            else:
                j += 1
        return -1

    @staticmethod
    def _split_top_level(s: str) -> list[str]:
        parts, depth, cur = [], 0, []
        k = 0
        while k < len(s):
            pair = s[k:k + 2]
            if pair == "[[":
                depth += 1
                cur.append(pair)
                k += 2
            elif pair == "]]":
                depth -= 1
                cur.append(pair)
                k += 2
            elif s[k] == "|" and depth == 0:
                parts.append("".join(cur))
                cur = []
                k += 1
            else:
                cur.append(s[k])
                k += 1
        parts.append("".join(cur))
        return parts

    def _internal_link(self, i: int, end: int) -> int:
        text = self.text
        close = self._matching_brackets(i, end)
        if close == -1:
            self.out.emit(text[i])
            return i + 1
        inner = text[i + 2:close - 2]
        parts = self._split_top_level(inner)
        target_raw = parts[0]
        head = target_raw.strip().lstrip(":")
        namespace = head.split(":", 1)[0].strip().lower() if ":" in head else ""
        if namespace == "category":
            return close
        if namespace in _MEDIA_NAMESPACES:
            if self.category == _PROSE:
                return close  # inline image: no prose content
            caption = _pick_caption(parts)
            if caption is not None:
                self._render_inline(caption, keep_links=True)
            return close
        target = normalize_title(head)
        if len(parts) > 1:
            anchor_raw = "|".join(parts[1:])
            if not anchor_raw.strip():  # pipe trick
                anchor_raw = _PAREN_SUFFIX.sub("", head.split(":")[-1]).replace("_", " ")
        else:
            anchor_raw = target_raw.replace("_", " ")
        start_pos = self.out.pos
        self._render_inline(anchor_raw, keep_links=False)
        end_pos = self.out.pos
        chars = self.out.chars
        while end_pos > start_pos and chars[end_pos - 1] == " ":
            end_pos -= 1
        while start_pos < end_pos and chars[start_pos] == " ":
            start_pos += 1
        if target and end_pos > start_pos:
            self.links.append((target, start_pos, end_pos))
        return close

    def _render_inline(self, fragment: str, keep_links: bool) -> None:
        """Render a source fragment that has no absolute offsets of its own."""
        scan = ScanResult(suppressed=_merge(
            [(m.start(), m.end()) for m in _COMMENT.finditer(fragment)]
            + _tag_spans(fragment, [])))
        sub = _BlockRenderer(fragment, scan, self.category)
        sub.out = self.out
        if keep_links:
            sub.links = self.links
        sub.render(0, len(fragment))

    def _external_link(self, i: int, end: int) -> int:
        text = self.text
        close = text.find("]", i + 1)
        if close == -1 or close >= end:
            self.out.emit(text[i])
            return i + 1
        inner = text[i + 1:close]
        space = inner.find(" ")
        if space != -1:
            self._render_inline(inner[space + 1:], keep_links=False)
        return close + 1


def parse_page(raw: RawPage) -> ParsedPage:
    """Parse a non-redirect page into plain paragraphs and internal links."""
    if raw.is_redirect:
        raise ValueError(f"page {raw.title!r} is a redirect; resolve it instead")
    text = raw.wikitext
    scan = scan_regions(text)
    if scan.unbalanced:
        log.warning("unbalanced markup on page %r; degrading to boilerplate "
                    "around the imbalance", raw.title)

    paragraphs: list[Paragraph] = []
    links: list[InternalLink] = []
    for category, start, end in _blocks(text, scan):
        renderer = _BlockRenderer(text, scan, category)
        renderer.render(start, end)
        plain = renderer.out.text()
        kept = [(t, s, e) for t, s, e in renderer.links if e <= len(plain)]
        if not plain and not kept:
            continue
        damaged = any(s < end and start < e for s, e in scan.unclosed)
        boilerplate = category != _PROSE or damaged
        index = len(paragraphs)
        paragraphs.append(Paragraph(plain, (start, end), boilerplate))
        for target, s, e in kept:
            links.append(InternalLink(target, plain[s:e], index, (s, e)))

    return ParsedPage(
        page_id=raw.page_id,
        title=raw.title,
        infobox_type=extract_infobox_type(text),
        paragraphs=tuple(paragraphs),
        links=tuple(links),
    )
