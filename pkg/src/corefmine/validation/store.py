"""Validation task queue and durable judgment persistence.

Storage is a single append-only JSON-lines log plus an optional snapshot
written by compaction.  Every accepted judgment is flushed and fsynced
before it is acknowledged, so a crash immediately after the ack cannot lose
it.  Writes are serialized through one lock; reads work on snapshots.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..pipeline.records import dump_record, read_records
from ..pipeline.types import CoreferenceChain, DatasetSplit, Mention

log = logging.getLogger("corefmine.validation")

VERDICTS = ("valid", "rejected")
REJECT_REASONS = ("insufficient_context", "boundary_not_trigger", "event_time",
                  "event_location", "subevent", "other")


@dataclass(frozen=True)
class ValidationTask:
    task_id: int
    split: str
    cluster_id: int
    pivot_title: str
    pivot_summary: str
    mention: dict
    practice: bool = False

    def to_record(self) -> dict:
        return {
            "task_id": self.task_id, "split": self.split,
            "cluster_id": self.cluster_id, "pivot_title": self.pivot_title,
            "pivot_summary": self.pivot_summary, "mention": self.mention,
            "practice": self.practice,
        }


@dataclass(frozen=True)
class Judgment:
    task_id: int
    annotator_id: str
    verdict: str
    reject_reason: str | None = None
    note: str = ""
    timestamp: float = 0.0
    submission_id: str | None = None

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "rejected":
            if self.reject_reason not in REJECT_REASONS:
                raise ValueError(
                    f"rejected verdict needs a reason from {REJECT_REASONS}")
        elif self.reject_reason is not None:
            raise ValueError("valid verdict must not carry a reject reason")
        if not self.annotator_id:
            raise ValueError("annotator_id is required")

    @property
    def is_valid(self) -> bool:
        return self.verdict == "valid"

    def to_record(self) -> dict:
        return {
            "task_id": self.task_id, "annotator_id": self.annotator_id,
            "verdict": self.verdict, "reject_reason": self.reject_reason,
            "note": self.note, "timestamp": self.timestamp,
            "submission_id": self.submission_id,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Judgment":
        return cls(task_id=rec["task_id"], annotator_id=rec["annotator_id"],
                   verdict=rec["verdict"], reject_reason=rec.get("reject_reason"),
                   note=rec.get("note", ""), timestamp=rec.get("timestamp", 0.0),
                   submission_id=rec.get("submission_id"))


class TaskStore:
    """Tasks plus judgments, with cluster-contiguous serving order."""

    def __init__(self, store_dir, candidates_path=None, practice: int = 0,
                 consolidator_id: str = "consolidator"):
        self.store_dir = Path(store_dir)
        self.store_dir.mkdir(parents=True, exist_ok=True)
        self.consolidator_id = consolidator_id
        self._lock = threading.Lock()
        self._tasks: dict[int, ValidationTask] = {}
        self._order: list[int] = []
        # (task_id, annotator_id) -> (sequence, Judgment); log order decides
        self._live: dict[tuple[int, str], tuple[int, Judgment]] = {}
        self._seen_submissions: set[str] = set()
        self._seq = 0

        tasks_file = self.store_dir / "tasks.jsonl"
        if candidates_path is not None:
            self._load_candidates(candidates_path, practice)
            with open(tasks_file, "w", encoding="utf-8") as f:
                for tid in self._order:
                    f.write(dump_record(self._tasks[tid].to_record()) + "\n")
        elif tasks_file.exists():
            for rec in read_records(tasks_file):
                task = ValidationTask(**rec)
                self._tasks[task.task_id] = task
                self._order.append(task.task_id)
        else:
            raise FileNotFoundError(
                f"no candidates given and {tasks_file} does not exist")

        self._log_path = self.store_dir / "judgments.log"
        self._snapshot_path = self.store_dir / "judgments.snapshot.jsonl"
        self._replay()
        self._log = open(self._log_path, "a", encoding="utf-8")

    # -- loading -----------------------------------------------------------

    def _load_candidates(self, candidates_path, practice: int) -> None:
        records = sorted(read_records(candidates_path),
                         key=lambda r: (r["cluster_id"], r["task_id"]))
        for i, rec in enumerate(records):
            task = ValidationTask(
                task_id=rec["task_id"], split=rec["split"],
                cluster_id=rec["cluster_id"], pivot_title=rec["pivot_title"],
                pivot_summary=rec.get("pivot_summary", ""),
                mention=rec["mention"], practice=i < practice)
            if task.task_id in self._tasks:
                raise ValueError(f"duplicate task id {task.task_id}")
            self._tasks[task.task_id] = task
            self._order.append(task.task_id)

    def _replay(self) -> None:
        for path in (self._snapshot_path, self._log_path):
            if not path.exists():
                continue
            for rec in read_records(path):
                try:
                    self._apply(Judgment.from_record(rec))
                except (KeyError, ValueError) as exc:
                    log.warning("skipping unreplayable judgment %r: %s", rec, exc)

    def _apply(self, judgment: Judgment) -> None:
        if judgment.task_id not in self._tasks:
            raise KeyError(f"unknown task {judgment.task_id}")
        self._seq += 1
        self._live[(judgment.task_id, judgment.annotator_id)] = (self._seq, judgment)
        if judgment.submission_id:
            self._seen_submissions.add(judgment.submission_id)

    # -- the service operations --------------------------------------------

    def next_task(self, annotator_id: str, split: str | None = None,
                  include_practice: bool = True,
                  skip_ids: set[int] | None = None) -> ValidationTask | None:
        """Lowest-ordered task this annotator has not judged yet.

        Order is cluster-contiguous: all tasks of one cluster are served
        before the next cluster starts.  ``skip_ids`` lets a client exclude
        tasks it has judged locally but not synced yet (offline buffering),
        so it can prefetch further work.
        """
        with self._lock:
            for tid in self._order:
                task = self._tasks[tid]
                if split is not None and task.split != split:
                    continue
                if not include_practice and task.practice:
                    continue
                if skip_ids and tid in skip_ids:
                    continue
                if (tid, annotator_id) not in self._live:
                    return task
        return None

    def submit(self, judgment: Judgment) -> dict:
        """Durably persist a judgment; resubmission supersedes."""
        with self._lock:
            if judgment.task_id not in self._tasks:
                raise KeyError(f"unknown task {judgment.task_id}")
            if judgment.submission_id and \
                    judgment.submission_id in self._seen_submissions:
                return {"status": "duplicate", "task_id": judgment.task_id}
            if judgment.timestamp == 0.0:
                judgment = Judgment(**{**judgment.to_record(),
                                       "timestamp": time.time()})
            self._log.write(dump_record(judgment.to_record()) + "\n")
            self._log.flush()
            os.fsync(self._log.fileno())
            self._apply(judgment)
        return {"status": "stored", "task_id": judgment.task_id}

    def judgments_by(self, annotator_id: str) -> dict[int, Judgment]:
        with self._lock:
            return {tid: j for (tid, ann), (_, j) in self._live.items()
                    if ann == annotator_id}

    def live_judgment(self, task_id: int) -> Judgment | None:
        """The judgment that currently stands for a task: the latest one in
        log order, across annotators."""
        best = None
        best_seq = -1
        for (tid, _), (seq, judgment) in self._live.items():
            if tid == task_id and seq > best_seq:
                best, best_seq = judgment, seq
        return best

    def progress(self) -> dict:
        with self._lock:
            judged = {tid for (tid, _) in self._live}
            by_split: dict[str, dict] = {}
            for tid in self._order:
                task = self._tasks[tid]
                entry = by_split.setdefault(task.split,
                                            {"total": 0, "judged": 0, "pending": 0})
                entry["total"] += 1
                if tid in judged:
                    entry["judged"] += 1
                else:
                    entry["pending"] += 1
            return {
                "total": len(self._order),
                "judged": len(judged & set(self._order)),
                "pending": len(self._order) - len(judged & set(self._order)),
                "by_split": by_split,
            }

    def export_validated(self, split: str, partial: bool = False) -> DatasetSplit:
        """Mentions of the split whose live judgment is valid, as chains.

        Practice tasks never export.  Without ``partial``, every exportable
        task must be judged.
        """
        with self._lock:
            tasks = [self._tasks[tid] for tid in self._order
                     if self._tasks[tid].split == split
                     and not self._tasks[tid].practice]
        unjudged = [t.task_id for t in tasks if self.live_judgment(t.task_id) is None]
        if unjudged and not partial:
            raise ValueError(
                f"{len(unjudged)} tasks of split {split!r} are unjudged: "
                f"{unjudged[:10]}")
        by_cluster: dict[int, list] = {}
        pivots: dict[int, str] = {}
        for task in tasks:
            judgment = self.live_judgment(task.task_id)
            if judgment is None or not judgment.is_valid:
                continue
            by_cluster.setdefault(task.cluster_id, []).append(
                Mention.from_record(task.mention))
            pivots[task.cluster_id] = task.pivot_title
        chains = [CoreferenceChain(cid, pivots[cid], ms)
                  for cid, ms in sorted(by_cluster.items())]
        return DatasetSplit(split, chains)

    def compact(self) -> None:
        """Fold the log into a snapshot of live judgments."""
        with self._lock:
            ordered = sorted(self._live.values(), key=lambda pair: pair[0])
            with open(self._snapshot_path, "w", encoding="utf-8") as f:
                for _, judgment in ordered:
                    f.write(dump_record(judgment.to_record()) + "\n")
            self._log.close()
            self._log = open(self._log_path, "w", encoding="utf-8")

    def close(self) -> None:
        self._log.close()

    def __len__(self) -> int:
        return len(self._order)
