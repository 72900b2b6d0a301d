"""End-to-end extraction: dump in, dataset splits out.

Two streaming passes over the dump keep memory flat: the first collects
redirects and pivot pages (only the infobox type is needed, so no full
parse), the second parses pages and gathers mentions.  Page parsing is pure
per page, so the second pass can fan out to worker processes without
affecting the output.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from pathlib import Path
from typing import Iterator

from ..manifest import build_manifest, write_manifest
from ..wikitext.dump import DumpReader
from ..wikitext.textparse import ParsedPage, extract_infobox_type, parse_page
from ..wikitext.redirects import resolve_redirects
from .extract import collect_pivots, finalize_mentions, page_mention_candidates
from .filters import (BLOCKED_NER_LABELS, MIN_CONTEXT_TOKENS, control_diversity,
                      filter_by_ner, filter_context)
from .records import (read_allowlist, read_ner, write_mentions,
                      write_parsed_pages, write_records)
from .splits import make_splits
from .types import CoreferenceChain, chains_from_mentions

log = logging.getLogger("corefmine.pipeline")


@dataclass
class ExtractionConfig:
    dump_path: Path
    allowlist_path: Path
    out_dir: Path
    ner_path: Path | None = None
    max_identical: int = 4
    eval_clusters: int = 0
    dev_fraction: float = 0.4
    seed: int = 0
    follow_redirects: bool = True
    keep_uncapped: bool = False
    min_context_tokens: int = MIN_CONTEXT_TOKENS
    namespaces: tuple[int, ...] = (0,)
    workers: int = 1
    url_base: str = "https://en.wikipedia.org/wiki/"
    pages_out: Path | None = None  # optional ParsedPage record dump

    def flags(self) -> dict:
        return {
            "dump": str(self.dump_path),
            "allowlist": str(self.allowlist_path),
            "ner": str(self.ner_path) if self.ner_path else None,
            "max_identical": self.max_identical,
            "eval_clusters": self.eval_clusters,
            "dev_fraction": self.dev_fraction,
            "seed": self.seed,
            "no_redirects": not self.follow_redirects,
            "keep_diversity": self.keep_uncapped,
            "min_context_tokens": self.min_context_tokens,
            "namespaces": list(self.namespaces),
            "workers": self.workers,
            "url_base": self.url_base,
        }


def _article_stream(cfg: ExtractionConfig) -> Iterator:
    reader = DumpReader(cfg.dump_path, namespaces=cfg.namespaces)
    return (p for p in reader if not p.is_redirect)


def _parsed_pages(cfg: ExtractionConfig) -> Iterator[ParsedPage]:
    articles = _article_stream(cfg)
    if cfg.workers > 1:
        with Pool(cfg.workers) as pool:
            yield from pool.imap(parse_page, articles, chunksize=16)
    else:
        for raw in articles:
            yield parse_page(raw)


def _write_split_files(splits, out_dir: Path, counts: dict, prefix: str = "") -> None:
    for name in ("train", "dev", "test"):
        split = splits[name]
        mentions = split.mentions
        write_mentions(out_dir / f"{name}.jsonl", mentions)
        counts[f"{prefix}{name}_mentions"] = len(mentions)
        counts[f"{prefix}{name}_clusters"] = len(split.chains)


def run_extraction(cfg: ExtractionConfig) -> dict:
    """Run the full pipeline; returns the manifest (also written to disk)."""
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts: dict = {}
    timings: dict = {}

    # pass 1: redirects + pivot registry (infobox scan only)
    t0 = time.perf_counter()
    allowlist = read_allowlist(cfg.allowlist_path)
    reader = DumpReader(cfg.dump_path, namespaces=cfg.namespaces)
    redirect_pages = []
    pivot_candidates = []
    total_pages = 0
    for raw in reader:
        total_pages += 1
        if raw.is_redirect:
            redirect_pages.append(raw)
        else:
            pivot_candidates.append((raw.title, extract_infobox_type(raw.wikitext)))
    registry = collect_pivots(pivot_candidates, allowlist)
    redirects = resolve_redirects(redirect_pages) if cfg.follow_redirects else None
    counts["pages_streamed"] = total_pages
    counts["pages_skipped"] = reader.skipped
    counts["redirect_pages"] = len(redirect_pages)
    counts["redirect_map_size"] = len(redirects) if redirects else 0
    counts["pivots"] = len(registry)
    timings["collect_pivots"] = time.perf_counter() - t0

    # pass 2: parse pages, gather mentions, remember pivot summaries
    t0 = time.perf_counter()
    collected = []
    summaries: dict[str, str] = {}
    pages_writer = open(cfg.pages_out, "w", encoding="utf-8") if cfg.pages_out else None
    try:
        for page in _parsed_pages(cfg):
            if pages_writer is not None:
                write_parsed_pages_line(pages_writer, page)
            if page.title in registry:
                summaries[page.title] = next(
                    (p.text for p in page.paragraphs if not p.is_boilerplate), "")
            collected.extend(page_mention_candidates(page, registry, redirects,
                                                     cfg.url_base))
    finally:
        if pages_writer is not None:
            pages_writer.close()
    mentions = finalize_mentions(collected)
    counts["mentions_raw"] = len(mentions)
    timings["collect_mentions"] = time.perf_counter() - t0

    # mention-level filters
    t0 = time.perf_counter()
    mentions, removed = filter_context(mentions, cfg.min_context_tokens)
    counts["mentions_after_context"] = len(mentions)
    counts["removed_no_context"] = len(removed)
    if cfg.ner_path:
        ner = read_ner(cfg.ner_path)
        counts["ner_annotations"] = len(ner)
        mentions, removed = filter_by_ner(mentions, ner)
        counts["removed_by_ner"] = len(removed)
    else:
        counts["ner_annotations"] = 0
        counts["removed_by_ner"] = 0
    counts["mentions_after_ner"] = len(mentions)
    timings["filters"] = time.perf_counter() - t0

    # cluster, cap lexical repetition, split
    t0 = time.perf_counter()
    pivot_titles = {e.cluster_id: t for t, e in registry.entries.items()}
    uncapped_chains = chains_from_mentions(mentions, pivot_titles)
    chains, removed_count = control_diversity(uncapped_chains, cfg.max_identical)
    counts["removed_by_diversity_cap"] = removed_count
    counts["mentions_after_diversity"] = sum(len(c) for c in chains)
    counts["clusters"] = len(chains)

    splits = make_splits(chains, cfg.eval_clusters, cfg.dev_fraction, cfg.seed)
    _write_split_files(splits, out_dir, counts)
    _write_candidates(splits, summaries, out_dir / "candidates.jsonl", counts)
    if cfg.keep_uncapped:
        uncapped_dir = out_dir / "uncapped"
        uncapped_dir.mkdir(exist_ok=True)
        uncapped_splits = make_splits(uncapped_chains, cfg.eval_clusters,
                                      cfg.dev_fraction, cfg.seed)
        _write_split_files(uncapped_splits, uncapped_dir, counts, prefix="uncapped_")
    timings["split_and_write"] = time.perf_counter() - t0

    manifest = build_manifest(
        "extract", cfg.flags(),
        inputs={"dump": cfg.dump_path, "allowlist": cfg.allowlist_path,
                "ner": cfg.ner_path},
        seed=cfg.seed, counts=counts, timings=timings,
        decisions={
            "follow_redirects": cfg.follow_redirects,
            "duplicate_anchors_in_paragraph_kept": True,
            "diversity_survivors": "first occurrences in title-sorted, "
                                   "document-order traversal",
        })
    write_manifest(out_dir / "manifest.json", manifest)
    return manifest


def write_parsed_pages_line(f, page: ParsedPage) -> None:
    from .records import dump_record
    f.write(dump_record(page.to_record()) + "\n")


def _write_candidates(splits, summaries: dict[str, str], path: Path,
                      counts: dict) -> None:
    """Validation tasks for the dev/test candidate mentions."""
    records = []
    for name in ("dev", "test"):
        for chain in splits[name].chains:
            for m in chain.mentions:
                records.append({
                    "task_id": m.mention_id,
                    "split": name,
                    "cluster_id": chain.cluster_id,
                    "pivot_title": chain.pivot_title,
                    "pivot_summary": summaries.get(chain.pivot_title, ""),
                    "mention": m.to_record(),
                })
    records.sort(key=lambda r: (r["cluster_id"], r["task_id"]))
    write_records(path, records)
    counts["validation_candidates"] = len(records)
