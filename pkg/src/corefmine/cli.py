"""Command-line entry point: one tool, one subcommand per pipeline stage."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .manifest import build_manifest, write_manifest
from .metrics import (Clustering, Partition, evaluate, format_table,
                      read_clustering, read_conll, write_clustering,
                      write_conll_pair)
from .pipeline import ExtractionConfig, read_mentions, run_extraction
from .pipeline.types import chains_from_mentions
from .resolver import (ClusteringConfig, agglomerate, lemma_baseline,
                       partition_restricted_clustering, read_scores,
                       tune_threshold)
from .stats import LemmaResource, compute_stats, format_stats_table
from .validation import TaskStore, ValidationService, serve

log = logging.getLogger("corefmine")


class _JsonLineFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "ts": round(record.created, 3),
            "level": record.levelname.lower(),
            "logger": record.name,
            "message": record.getMessage(),
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True)


def _setup_logging(verbose: bool) -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_JsonLineFormatter())
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def _default_dir(env: str, fallback: str) -> str:
    return os.environ.get(env, fallback)


# ---------------------------------------------------------------------------
# input sniffing
# ---------------------------------------------------------------------------

def load_partition(path) -> Partition:
    """Read a clustering from any of the three accepted formats.

    Mention record files group by cluster_id; native clustering records list
    mention ids per cluster; scorer-interchange files use bracket notation.
    """
    with open(path, encoding="utf-8") as f:
        head = f.readline()
    if head.startswith("#begin document"):
        return read_conll(path)
    rec = json.loads(head) if head.strip() else {}
    if "mention_ids" in rec or "provenance" in rec:
        return read_clustering(path).partition
    mentions = read_mentions(path)
    return Partition.from_mapping({m.mention_id: m.cluster_id for m in mentions})


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_extract(args) -> int:
    cfg = ExtractionConfig(
        dump_path=Path(args.dump),
        allowlist_path=Path(args.allowlist),
        ner_path=Path(args.ner) if args.ner else None,
        out_dir=Path(args.out_dir),
        max_identical=args.max_identical,
        eval_clusters=args.eval_clusters,
        dev_fraction=args.dev_fraction,
        seed=args.seed,
        follow_redirects=not args.no_redirects,
        keep_uncapped=args.keep_diversity,
        min_context_tokens=args.min_context_tokens,
        namespaces=tuple(int(n) for n in args.namespaces.split(",")),
        workers=args.workers,
        url_base=args.url_base,
        pages_out=Path(args.pages_out) if args.pages_out else None,
    )
    manifest = run_extraction(cfg)
    log.info("extract finished: %s", json.dumps(manifest["counts"], sort_keys=True))
    return 0


def cmd_stats(args) -> int:
    lemmas = LemmaResource.from_file(args.lemmas) if args.lemmas else LemmaResource()
    reports = {}
    for path in args.mentions:
        mentions = read_mentions(path)
        chains = chains_from_mentions(mentions)
        reports[Path(path).stem] = compute_stats(chains, lemmas)
    if args.format == "table":
        print(format_stats_table(reports))
    else:
        for name, report in reports.items():
            print(json.dumps({"split": name, **report.to_record()},
                             sort_keys=True, ensure_ascii=False))
    return 0


def cmd_resolve(args) -> int:
    mentions = read_mentions(args.mentions)
    started = time.perf_counter()
    if args.lemma_baseline:
        lemmas = LemmaResource.from_file(args.lemmas) if args.lemmas \
            else LemmaResource()
        clustering = lemma_baseline(mentions, lemmas)
    else:
        if not args.scores:
            raise SystemExit("resolve: either --scores or --lemma-baseline "
                             "is required")
        matrix = read_scores(args.scores, default_score=args.default_score)
        universe = {m.mention_id for m in mentions}
        if set(matrix.mention_ids) != universe:
            raise SystemExit("resolve: score-file universe differs from the "
                             "mentions file")
        threshold = args.threshold
        if args.tune_on:
            if not args.tune_scores:
                raise SystemExit("resolve: --tune-on needs --tune-scores")
            dev_mentions = read_mentions(args.tune_on)
            dev_key = Partition.from_mapping(
                {m.mention_id: m.cluster_id for m in dev_mentions})
            dev_matrix = read_scores(args.tune_scores,
                                     default_score=args.default_score)
            threshold = tune_threshold(dev_key, dev_matrix)
            log.info("tuned threshold on dev: %.4f", threshold)
        cfg = ClusteringConfig(threshold=threshold)
        if args.doc_partition:
            doc_group = {}
            with open(args.doc_partition, encoding="utf-8") as f:
                for line in f:
                    line = line.rstrip("\n")
                    if not line or line.startswith("#"):
                        continue
                    doc, _, group = line.partition("\t")
                    doc_group[doc] = group
            mention_doc = {m.mention_id: m.source_title for m in mentions}
            clustering = partition_restricted_clustering(
                matrix, cfg, mention_doc, doc_group)
        else:
            clustering = agglomerate(matrix, cfg)
        from .manifest import file_digest
        clustering = Clustering(clustering.partition, {
            **clustering.provenance, "score_file_digest": file_digest(args.scores),
        })
    write_clustering(args.out, clustering)
    manifest = build_manifest(
        "resolve",
        flags={"mentions": args.mentions, "scores": args.scores,
               "lemma_baseline": args.lemma_baseline,
               "threshold": args.threshold, "tune_on": args.tune_on,
               "doc_partition": args.doc_partition, "out": args.out},
        inputs={"mentions": args.mentions, "scores": args.scores,
                "lemmas": args.lemmas},
        counts={"mentions": len(mentions),
                "clusters": len(clustering.partition)},
        timings={"resolve": time.perf_counter() - started},
        decisions=clustering.provenance)
    write_manifest(Path(args.out).with_suffix(".manifest.json"), manifest)
    log.info("resolve finished: %d clusters over %d mentions",
             len(clustering.partition), len(mentions))
    return 0


def cmd_eval(args) -> int:
    key = load_partition(args.key)
    response = load_partition(args.response)
    report = evaluate(key, response)
    if args.format == "table":
        print(format_table({args.name: report}))
    else:
        print(json.dumps(report.to_dict(), sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    store = TaskStore(args.store, candidates_path=args.candidates,
                      practice=args.practice, consolidator_id=args.consolidator)
    service = ValidationService(store,
                                train_path=args.train,
                                out_dir=args.out_dir or args.store)
    serve(service, host=args.host, port=args.port)
    return 0


def cmd_convert(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    key = load_partition(args.key)
    response = load_partition(args.response)
    if args.to == "conll":
        write_conll_pair(key, response, out_dir / "key.conll",
                         out_dir / "response.conll")
        log.info("wrote %s and %s", out_dir / "key.conll",
                 out_dir / "response.conll")
    else:
        write_clustering(out_dir / "key.jsonl", Clustering(key))
        write_clustering(out_dir / "response.jsonl", Clustering(response))
        log.info("wrote %s and %s", out_dir / "key.jsonl",
                 out_dir / "response.jsonl")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corefmine",
        description="Build, resolve and evaluate cross-document event "
                    "coreference datasets mined from MediaWiki dumps.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--verbose", action="store_true",
                        help="debug-level logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="run the dataset construction pipeline")
    p.add_argument("--dump", required=True, help="pages-articles export file "
                   "(.xml, .xml.bz2 or .xml.gz)")
    p.add_argument("--allowlist", required=True,
                   help="event infobox types, one per line")
    p.add_argument("--ner", help="standoff NE annotations (JSON lines)")
    p.add_argument("--max-identical", type=int, default=4,
                   help="per-cluster cap on identical mention strings")
    p.add_argument("--eval-clusters", type=int, default=0,
                   help="clusters sampled for the dev/test candidate pool")
    p.add_argument("--dev-fraction", type=float, default=0.4,
                   help="fraction of sampled eval mentions assigned to dev")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=_default_dir("COREFMINE_OUT_DIR", "out"))
    p.add_argument("--no-redirects", action="store_true",
                   help="do not follow redirects when matching pivot links")
    p.add_argument("--keep-diversity", action="store_true",
                   help="also emit the variant without the identical-string cap")
    p.add_argument("--min-context-tokens", type=int, default=5)
    p.add_argument("--namespaces", default="0",
                   help="comma-separated namespace ids to keep")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--url-base", default="https://en.wikipedia.org/wiki/")
    p.add_argument("--pages-out", help="also write ParsedPage records here")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("stats", help="dataset statistics per split")
    p.add_argument("--mentions", nargs="+", required=True,
                   help="mention record files (one per split)")
    p.add_argument("--lemmas", help="two-column surface<TAB>lemma file")
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("resolve", help="produce a system clustering")
    p.add_argument("--mentions", required=True)
    p.add_argument("--scores", help="pairwise score file")
    p.add_argument("--lemma-baseline", action="store_true",
                   help="cluster by shared head lemma instead of scores")
    p.add_argument("--lemmas", help="lemma resource for the baseline")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--default-score", type=float, default=0.0,
                   help="score assumed for pairs absent from a sparse file")
    p.add_argument("--tune-on", help="dev mention records for threshold tuning")
    p.add_argument("--tune-scores", help="dev score file for threshold tuning")
    p.add_argument("--doc-partition",
                   help="TSV source_title<TAB>group restricting merges")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("eval", help="score a response clustering against a key")
    p.add_argument("--key", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--name", default="response", help="row label in table output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="run the manual validation service")
    p.add_argument("--candidates", help="candidate task records from extract")
    p.add_argument("--store", required=True,
                   default=_default_dir("COREFMINE_STORE_DIR", "store"),
                   help="durable judgment store directory")
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--train", help="train split to purge on export")
    p.add_argument("--out-dir", help="where exports land (default: store dir)")
    p.add_argument("--practice", type=int, default=0,
                   help="mark the first N tasks as practice (never exported)")
    p.add_argument("--consolidator", default="consolidator",
                   help="annotator id whose judgments consolidate the others")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("convert",
                       help="convert key/response pairs between clustering "
                            "formats")
    p.add_argument("--key", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--to", choices=("conll", "records"), required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except FileNotFoundError as exc:
        log.error("missing input: %s", exc)
        return 1
    except (ValueError, KeyError) as exc:
        log.error("invalid input: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
