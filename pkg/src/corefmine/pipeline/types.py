"""Domain types for the dataset construction pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PivotEntry:
    cluster_id: int
    infobox_type: str


@dataclass
class EventRegistry:
    """Event pages selected by infobox type; one coreference cluster each.

    Cluster ids are dense and assigned in sorted-title order, so a registry
    built from the same pages is always identical.
    """

    entries: dict[str, PivotEntry] = field(default_factory=dict)

    def __contains__(self, title: str) -> bool:
        return title in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def cluster_id(self, title: str) -> int:
        return self.entries[title].cluster_id


@dataclass(frozen=True)
class Mention:
    """An anchor-text event mention with its context paragraph.

    ``span`` is an inclusive (first, last) pair of token indices into
    ``tokens``.  ``metadata`` carries link provenance (source/target URLs,
    pivot infobox type) and is never consulted by resolution algorithms.
    ``paragraph_index`` and ``char_span`` locate the anchor inside its source
    page during extraction; they are not part of the dataset record.
    """

    mention_id: int
    tokens: tuple[str, ...]
    span: tuple[int, int]
    mention_text: str
    source_title: str
    target_title: str
    cluster_id: int
    metadata: dict = field(default_factory=dict)
    paragraph_index: int | None = None
    char_span: tuple[int, int] | None = None

    def __post_init__(self):
        first, last = self.span
        if not (0 <= first <= last < len(self.tokens)):
            raise ValueError(f"span {self.span} outside tokens (len {len(self.tokens)})")
        squeezed = "".join(self.mention_text.split())
        if "".join(self.tokens[first:last + 1]) != squeezed:
            raise ValueError(
                f"mention_text {self.mention_text!r} does not match span tokens "
                f"{self.tokens[first:last + 1]!r}")

    @property
    def span_tokens(self) -> tuple[str, ...]:
        first, last = self.span
        return self.tokens[first:last + 1]

    def to_record(self) -> dict:
        return {
            "mention_id": self.mention_id,
            "tokens": list(self.tokens),
            "span": list(self.span),
            "mention_text": self.mention_text,
            "source_title": self.source_title,
            "target_title": self.target_title,
            "cluster_id": self.cluster_id,
            "metadata": self.metadata,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Mention":
        return cls(
            mention_id=rec["mention_id"],
            tokens=tuple(rec["tokens"]),
            span=(rec["span"][0], rec["span"][1]),
            mention_text=rec["mention_text"],
            source_title=rec["source_title"],
            target_title=rec["target_title"],
            cluster_id=rec["cluster_id"],
            metadata=rec.get("metadata", {}),
        )


@dataclass
class CoreferenceChain:
    """All mentions pointing at one pivot page."""

    cluster_id: int
    pivot_title: str
    mentions: list[Mention]

    def __post_init__(self):
        for m in self.mentions:
            if m.cluster_id != self.cluster_id:
                raise ValueError(
                    f"mention {m.mention_id} has cluster {m.cluster_id}, "
                    f"chain is {self.cluster_id}")

    def __len__(self) -> int:
        return len(self.mentions)


@dataclass
class DatasetSplit:
    name: str
    chains: list[CoreferenceChain]

    def __post_init__(self):
        if self.name not in ("train", "dev", "test"):
            raise ValueError(f"unknown split name {self.name!r}")

    @property
    def mentions(self) -> list[Mention]:
        return [m for chain in self.chains for m in chain.mentions]

    def cluster_ids(self) -> set[int]:
        return {chain.cluster_id for chain in self.chains}


class NerAnnotation:
    """Standoff named-entity spans keyed by (source_title, paragraph_index).

    Absence of a key means the region is untagged.  The toolkit never runs a
    tagger itself; annotations are produced externally and ingested here.
    """

    def __init__(self):
        self._spans: dict[tuple[str, int], list[tuple[int, int, str]]] = {}

    def add(self, source_title: str, paragraph_index: int,
            char_start: int, char_end: int, label: str) -> None:
        key = (source_title, paragraph_index)
        self._spans.setdefault(key, []).append((char_start, char_end, label))

    def spans_for(self, source_title: str, paragraph_index: int) -> list[tuple[int, int, str]]:
        return self._spans.get((source_title, paragraph_index), [])

    def titles(self) -> set[str]:
        return {title for title, _ in self._spans}

    def __len__(self) -> int:
        return sum(len(v) for v in self._spans.values())


def chains_from_mentions(mentions: list[Mention],
                         pivot_titles: dict[int, str] | None = None) -> list[CoreferenceChain]:
    """Group mentions into chains by cluster id, ordered by cluster id."""
    by_cluster: dict[int, list[Mention]] = {}
    for m in mentions:
        by_cluster.setdefault(m.cluster_id, []).append(m)
    chains = []
    for cid in sorted(by_cluster):
        members = by_cluster[cid]
        pivot = pivot_titles.get(cid, members[0].target_title) if pivot_titles \
            else members[0].target_title
        chains.append(CoreferenceChain(cid, pivot, members))
    return chains
