"""Dataset statistics: mention/cluster counts, ambiguity and diversity.

Both ratio statistics are driven by the head lemma of each mention span:
ambiguity is the average number of distinct clusters a head lemma appears
in, diversity the average number of distinct head lemmas inside a cluster
(singleton clusters excluded).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .pipeline.types import CoreferenceChain, DatasetSplit, Mention

# Function words skipped when picking a span head.  Deliberately small: the
# head rule only needs to step over trailing determiners/prepositions, and a
# short list keeps the behaviour easy to reason about per language.
STOP_WORDS = frozenset("""
a an the this that these those some any no
of in on at to for by with from into onto over under between during
and or nor but so yet as than
is are was were be been being am
it its his her their our your my
""".split())

_NUMBER = re.compile(r"\d+([.,:\-/]\d+)*")
_WORD = re.compile(r"\w+", re.UNICODE)


class LemmaResource:
    """Total surface-form -> lemma lookup with an identity fallback.

    Backed by an optional two-column ``surface<TAB>lemma`` table; tokens not
    in the table lemmatize to their case-folded selves.
    """

    def __init__(self, table: dict[str, str] | None = None):
        self._table = {k.casefold(): v for k, v in (table or {}).items()}

    @classmethod
    def from_file(cls, path) -> "LemmaResource":
        table = {}
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                surface, _, lemma = line.partition("\t")
                if not lemma:
                    raise ValueError(f"malformed lemma line (need TAB): {line!r}")
                table[surface] = lemma
        return cls(table)

    def lookup(self, token: str) -> str:
        folded = token.casefold()
        return self._table.get(folded, folded)

    def __len__(self) -> int:
        return len(self._table)


def is_content_token(token: str, stop_words: frozenset = STOP_WORDS) -> bool:
    if not _WORD.search(token):
        return False  # pure punctuation
    if _NUMBER.fullmatch(token):
        return False
    return token.casefold() not in stop_words


def head_lemma(mention: Mention, lemmas: LemmaResource,
               stop_words: frozenset = STOP_WORDS) -> str:
    """Lemma of the span's head token.

    Head = rightmost span token that is not a stop word, punctuation, or a
    pure number; if every token is excluded, the rightmost token.  A real
    parser's heads can be substituted by precomputing lemmas per mention and
    passing a resource keyed on them.
    """
    span_tokens = mention.span_tokens
    for token in reversed(span_tokens):
        if is_content_token(token, stop_words):
            return lemmas.lookup(token)
    return lemmas.lookup(span_tokens[-1])


@dataclass(frozen=True)
class StatsReport:
    mentions: int
    clusters: int
    non_singleton_clusters: int
    ambiguity: float | None  # None when no lemma occurs
    diversity: float | None  # None when no non-singleton cluster exists
    same_string_average: float | None = None

    def to_record(self) -> dict:
        return {
            "mentions": self.mentions,
            "clusters": self.clusters,
            "non_singleton_clusters": self.non_singleton_clusters,
            "ambiguity": self.ambiguity,
            "diversity": self.diversity,
            "same_string_average": self.same_string_average,
        }


def normalize_string(text: str) -> str:
    """Case-fold and collapse whitespace; the identical-string key."""
    return " ".join(text.casefold().split())


def compute_stats(chains: Iterable[CoreferenceChain] | DatasetSplit,
                  lemmas: LemmaResource | None = None) -> StatsReport:
    if isinstance(chains, DatasetSplit):
        chains = chains.chains
    chains = list(chains)
    lemmas = lemmas or LemmaResource()

    mention_count = sum(len(c) for c in chains)
    cluster_count = len(chains)
    non_singleton = sum(1 for c in chains if len(c) > 1)

    lemma_clusters: dict[str, set[int]] = {}
    cluster_lemmas: dict[int, set[str]] = {}
    same_string_ratios = []
    for chain in chains:
        lemmas_here: set[str] = set()
        strings: dict[str, int] = {}
        for m in chain.mentions:
            lemma = head_lemma(m, lemmas)
            lemmas_here.add(lemma)
            lemma_clusters.setdefault(lemma, set()).add(chain.cluster_id)
            key = normalize_string(m.mention_text)
            strings[key] = strings.get(key, 0) + 1
        cluster_lemmas[chain.cluster_id] = lemmas_here
        if strings:
            same_string_ratios.append(len(chain) / len(strings))

    ambiguity = None
    if lemma_clusters:
        ambiguity = sum(len(v) for v in lemma_clusters.values()) / len(lemma_clusters)
    diversity = None
    non_singleton_lemma_counts = [len(cluster_lemmas[c.cluster_id])
                                  for c in chains if len(c) > 1]
    if non_singleton_lemma_counts:
        diversity = sum(non_singleton_lemma_counts) / len(non_singleton_lemma_counts)
    same_string = None
    if same_string_ratios:
        same_string = sum(same_string_ratios) / len(same_string_ratios)

    return StatsReport(mention_count, cluster_count, non_singleton,
                       ambiguity, diversity, same_string)


def format_stats_table(reports: dict[str, StatsReport]) -> str:
    """Tabular output with the columns of the usual dataset-statistics table."""
    def fmt(x: float | None) -> str:
        return "n/a" if x is None else f"{x:.1f}"

    header = (f"{'Split':12s} {'Mentions':>9s} {'Clusters':>9s} "
              f"{'Non-Singleton':>14s} {'Ambiguity':>10s} {'Diversity':>10s}")
    lines = [header]
    for name, r in reports.items():
        lines.append(f"{name[:12]:12s} {r.mentions:>9d} {r.clusters:>9d} "
                     f"{r.non_singleton_clusters:>14d} {fmt(r.ambiguity):>10s} "
                     f"{fmt(r.diversity):>10s}")
    return "\n".join(lines)
