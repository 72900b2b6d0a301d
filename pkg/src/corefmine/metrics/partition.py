"""Clusterings of mention ids, and their native on-disk record format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping


@dataclass(frozen=True)
class Partition:
    """A set of pairwise-disjoint, non-empty clusters of mention ids."""

    clusters: tuple[frozenset, ...]

    def __post_init__(self):
        seen: set = set()
        for cluster in self.clusters:
            if not cluster:
                raise ValueError("empty cluster in partition")
            if seen & cluster:
                raise ValueError("clusters overlap: %r" % sorted(seen & cluster, key=repr)[:5])
            seen |= cluster

    @classmethod
    def of(cls, clusters: Iterable[Iterable[Hashable]]) -> "Partition":
        return cls(tuple(frozenset(c) for c in clusters))

    @classmethod
    def from_mapping(cls, assignment: Mapping[Hashable, Hashable]) -> "Partition":
        """Build from a mention-id -> cluster-label mapping."""
        by_label: dict = {}
        for mention, label in assignment.items():
            by_label.setdefault(label, set()).add(mention)
        return cls.of(by_label.values())

    @property
    def mentions(self) -> frozenset:
        return frozenset(m for c in self.clusters for m in c)

    def index(self) -> dict:
        """mention id -> its cluster (frozenset)."""
        return {m: c for c in self.clusters for m in c}

    def __len__(self) -> int:
        return len(self.clusters)


@dataclass(frozen=True)
class Clustering:
    """A partition plus provenance describing how it was produced."""

    partition: Partition
    provenance: dict = field(default_factory=dict)


def stable_sorted(items: Iterable) -> list:
    """Natural sort when the items are mutually comparable, repr order
    otherwise (mention ids may be ints or conversion-produced tuples)."""
    items = list(items)
    try:
        return sorted(items)
    except TypeError:
        return sorted(items, key=repr)


def write_clustering(path, clustering: Clustering) -> None:
    """Native clustering records: one JSON object per cluster per line.

    Cluster ids are positional; provenance rides along as a leading record so
    a clustering file is self-describing.
    """
    with open(path, "w", encoding="utf-8") as f:
        if clustering.provenance:
            f.write(json.dumps({"provenance": clustering.provenance},
                               sort_keys=True, ensure_ascii=False) + "\n")
        clusters = sorted(clustering.partition.clusters,
                          key=lambda c: repr(stable_sorted(c)))
        for i, cluster in enumerate(clusters):
            rec = {"cluster_id": i, "mention_ids": stable_sorted(cluster)}
            f.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")


def read_clustering(path) -> Clustering:
    provenance: dict = {}
    clusters: list[list] = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            if "provenance" in rec:
                provenance = rec["provenance"]
                continue
            clusters.append(rec["mention_ids"])
    return Clustering(Partition.of(clusters), provenance)
