"""HTTP interface to the validation workflow.

A small JSON request/response API over the standard-library threading HTTP
server: annotator clients pull tasks, post judgments, and watch progress;
exporting a split also rewrites the training set with leakage purged.
CORS headers are permissive so a browser UI served from anywhere local can
talk to it.
"""

from __future__ import annotations

import json
import logging
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from ..pipeline.records import read_mentions, write_mentions
from ..pipeline.splits import purge_train_leakage
from ..pipeline.types import DatasetSplit, chains_from_mentions
from .agreement import agreement
from .store import Judgment, TaskStore

log = logging.getLogger("corefmine.validation")


class ValidationService:
    def __init__(self, store: TaskStore, train_path: Path | None = None,
                 out_dir: Path | None = None):
        self.store = store
        self.train_path = Path(train_path) if train_path else None
        self.out_dir = Path(out_dir) if out_dir else store.store_dir

    # -- endpoint bodies -----------------------------------------------------

    def next_task(self, annotator: str, split: str | None,
                  include_practice: bool,
                  skip_ids: set[int] | None = None) -> dict | None:
        task = self.store.next_task(annotator, split, include_practice,
                                    skip_ids=skip_ids)
        return task.to_record() if task else None

    def submit(self, body: dict) -> dict:
        judgment = Judgment(
            task_id=body["task_id"], annotator_id=body["annotator_id"],
            verdict=body["verdict"], reject_reason=body.get("reject_reason"),
            note=body.get("note", ""),
            submission_id=body.get("submission_id"))
        return self.store.submit(judgment)

    def progress(self) -> dict:
        return self.store.progress()

    def agreement_report(self, annotator: str, gold: str | None) -> dict:
        gold = gold or self.store.consolidator_id
        mine = self.store.judgments_by(annotator)
        theirs = self.store.judgments_by(gold)
        shared = set(mine) & set(theirs)
        if not shared:
            raise ValueError(
                f"no tasks judged by both {annotator!r} and {gold!r}")
        report = agreement({t: mine[t] for t in shared},
                           {t: theirs[t] for t in shared})
        return {"annotator": annotator, "gold": gold,
                "tasks_compared": len(shared), **report.to_dict()}

    def export(self, split: str, partial: bool) -> dict:
        validated = self.store.export_validated(split, partial=partial)
        out_path = self.out_dir / f"{split}.validated.jsonl"
        write_mentions(out_path, validated.mentions)
        result = {
            "split": split,
            "exported_mentions": len(validated.mentions),
            "exported_clusters": len(validated.chains),
            "path": str(out_path),
        }
        if self.train_path is not None:
            # purge against every validated eval mention across both splits
            eval_mentions = list(validated.mentions)
            other = "test" if split == "dev" else "dev"
            try:
                eval_mentions += self.store.export_validated(
                    other, partial=True).mentions
            except ValueError:
                pass
            train = DatasetSplit("train", chains_from_mentions(
                read_mentions(self.train_path)))
            purged = purge_train_leakage(train, eval_mentions)
            purged_path = self.out_dir / "train.purged.jsonl"
            write_mentions(purged_path, purged.mentions)
            result["train_purged_path"] = str(purged_path)
            result["train_mentions_after_purge"] = len(purged.mentions)
        return result


class _Handler(BaseHTTPRequestHandler):
    service: ValidationService = None  # set by make_server

    # -- plumbing ------------------------------------------------------------

    def log_message(self, fmt, *args):
        log.debug("http: " + fmt, *args)

    def _send(self, status: int, payload) -> None:
        body = json.dumps(payload, sort_keys=True, ensure_ascii=False).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        if not length:
            return {}
        return json.loads(self.rfile.read(length))

    def do_OPTIONS(self):
        self._send(204, {})

    # -- routes --------------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}
        try:
            if url.path == "/tasks/next":
                annotator = query.get("annotator")
                if not annotator:
                    return self._send(400, {"error": "annotator is required"})
                skip = query.get("skip", "")
                skip_ids = {int(t) for t in skip.split(",") if t.strip()} \
                    if skip else None
                task = self.service.next_task(
                    annotator, query.get("split"),
                    query.get("include_practice", "1") not in ("0", "false"),
                    skip_ids=skip_ids)
                if task is None:
                    return self._send(200, {"task": None, "done": True})
                return self._send(200, {"task": task, "done": False})
            if url.path == "/progress":
                return self._send(200, self.service.progress())
            if url.path == "/agreement":
                annotator = query.get("annotator")
                if not annotator:
                    return self._send(400, {"error": "annotator is required"})
                return self._send(200, self.service.agreement_report(
                    annotator, query.get("gold")))
            return self._send(404, {"error": f"no such endpoint {url.path}"})
        except (ValueError, KeyError) as exc:
            return self._send(400, {"error": str(exc)})

    def do_POST(self):
        url = urlparse(self.path)
        query = {k: v[-1] for k, v in parse_qs(url.query).items()}
        try:
            if url.path == "/judgments":
                body = self._read_body()
                return self._send(200, self.service.submit(body))
            if url.path == "/export":
                split = query.get("split")
                if split not in ("dev", "test"):
                    return self._send(400, {"error": "split must be dev or test"})
                partial = query.get("partial", "0") in ("1", "true")
                return self._send(200, self.service.export(split, partial))
            return self._send(404, {"error": f"no such endpoint {url.path}"})
        except KeyError as exc:
            return self._send(400, {"error": f"missing field {exc}"})
        except ValueError as exc:
            return self._send(400, {"error": str(exc)})
        except json.JSONDecodeError as exc:
            return self._send(400, {"error": f"bad JSON body: {exc}"})


def make_server(service: ValidationService, host: str = "127.0.0.1",
                port: int = 8571) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve(service: ValidationService, host: str = "127.0.0.1",
          port: int = 8571) -> None:
    server = make_server(service, host, port)
    log.info("validation service on http://%s:%d (%d tasks)", host, port,
             len(service.store))
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
