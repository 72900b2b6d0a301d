import json
import math
import threading
import urllib.request

import pytest

from corefmine.pipeline import read_mentions
from corefmine.validation import (Judgment, TaskStore, ValidationService,
                                  agreement, make_server)

import oracles


@pytest.fixture()
def store(fixtures_dir, tmp_path):
    return TaskStore(tmp_path / "store",
                     candidates_path=fixtures_dir / "golden" / "candidates.jsonl")


def judge(store, task_id, annotator="ann1", verdict="valid", reason=None,
          submission_id=None):
    return store.submit(Judgment(task_id=task_id, annotator_id=annotator,
                                 verdict=verdict, reject_reason=reason,
                                 submission_id=submission_id))


class TestJudgmentInvariants:
    def test_rejected_needs_reason(self):
        with pytest.raises(ValueError):
            Judgment(task_id=1, annotator_id="a", verdict="rejected")

    def test_valid_refuses_reason(self):
        with pytest.raises(ValueError):
            Judgment(task_id=1, annotator_id="a", verdict="valid",
                     reject_reason="subevent")

    def test_unknown_verdict(self):
        with pytest.raises(ValueError):
            Judgment(task_id=1, annotator_id="a", verdict="maybe")

    def test_reason_must_be_known(self):
        with pytest.raises(ValueError):
            Judgment(task_id=1, annotator_id="a", verdict="rejected",
                     reject_reason="bogus")


class TestTaskStore:
    def test_loads_all_candidates(self, store):
        assert len(store) == 9

    def test_next_task_is_cluster_contiguous(self, store):
        seen_clusters = []
        while True:
            task = store.next_task("ann1")
            if task is None:
                break
            if not seen_clusters or seen_clusters[-1] != task.cluster_id:
                seen_clusters.append(task.cluster_id)
            judge(store, task.task_id)
        # each cluster appears exactly once in the serving sequence
        assert len(seen_clusters) == len(set(seen_clusters))

    def test_next_task_skips_own_judgments_only(self, store):
        first = store.next_task("ann1")
        judge(store, first.task_id, "ann1")
        assert store.next_task("ann1").task_id != first.task_id
        assert store.next_task("ann2").task_id == first.task_id

    def test_empty_store_returns_none(self, tmp_path):
        empty = tmp_path / "cand.jsonl"
        empty.write_text("")
        s = TaskStore(tmp_path / "store", candidates_path=empty)
        assert s.next_task("ann1") is None

    def test_unknown_task_rejected(self, store):
        with pytest.raises(KeyError):
            judge(store, 424242)

    def test_resubmission_supersedes(self, store):
        task = store.next_task("ann1")
        judge(store, task.task_id, verdict="valid")
        judge(store, task.task_id, verdict="rejected", reason="subevent")
        live = store.live_judgment(task.task_id)
        assert live.verdict == "rejected"
        assert live.reject_reason == "subevent"

    def test_idempotent_submission_key(self, store):
        task = store.next_task("ann1")
        a = judge(store, task.task_id, submission_id="sub-1")
        b = judge(store, task.task_id, submission_id="sub-1")
        assert a["status"] == "stored"
        assert b["status"] == "duplicate"

    def test_durability_across_restart(self, fixtures_dir, tmp_path):
        path = tmp_path / "store"
        s1 = TaskStore(path, candidates_path=fixtures_dir / "golden" / "candidates.jsonl")
        first = s1.next_task("ann1")
        judge(s1, first.task_id, verdict="rejected", reason="event_time")
        s1.close()
        s2 = TaskStore(path)
        live = s2.live_judgment(first.task_id)
        assert live is not None and live.reject_reason == "event_time"
        assert s2.next_task("ann1").task_id != first.task_id

    def test_compaction_preserves_state(self, fixtures_dir, tmp_path):
        path = tmp_path / "store"
        s1 = TaskStore(path, candidates_path=fixtures_dir / "golden" / "candidates.jsonl")
        ids = []
        for _ in range(3):
            task = s1.next_task("ann1")
            judge(s1, task.task_id)
            ids.append(task.task_id)
        s1.compact()
        judge(s1, s1.next_task("ann1").task_id)
        s1.close()
        s2 = TaskStore(path)
        assert s2.progress()["judged"] == 4

    def test_progress_monotone(self, store):
        pending = [store.progress()["pending"]]
        for _ in range(4):
            judge(store, store.next_task("ann1").task_id)
            pending.append(store.progress()["pending"])
        assert pending == sorted(pending, reverse=True)


class TestExport:
    def test_all_valid_exports_everything(self, store):
        while (task := store.next_task("ann1")) is not None:
            judge(store, task.task_id)
        split = store.export_validated("dev")
        assert len(split.mentions) == 4
        split = store.export_validated("test")
        assert len(split.mentions) == 5

    def test_rejections_drop_mentions(self, store):
        rejected = 0
        while (task := store.next_task("ann1")) is not None:
            if task.split == "test" and rejected < 2:
                judge(store, task.task_id, verdict="rejected", reason="subevent")
                rejected += 1
            else:
                judge(store, task.task_id)
        assert len(store.export_validated("test").mentions) == 3

    def test_unjudged_without_partial_errors(self, store):
        with pytest.raises(ValueError, match="unjudged"):
            store.export_validated("dev")
        assert store.export_validated("dev", partial=True).mentions == []

    def test_cluster_emptied_by_rejection_dropped(self, store):
        while (task := store.next_task("ann1")) is not None:
            if task.split == "dev":
                judge(store, task.task_id, verdict="rejected",
                      reason="insufficient_context")
            else:
                judge(store, task.task_id)
        assert store.export_validated("dev").chains == []

    def test_practice_tasks_never_export(self, fixtures_dir, tmp_path):
        s = TaskStore(tmp_path / "store",
                      candidates_path=fixtures_dir / "golden" / "candidates.jsonl",
                      practice=3)
        while (task := s.next_task("ann1")) is not None:
            judge(s, task.task_id)
        total = len(s.export_validated("dev").mentions) + \
            len(s.export_validated("test").mentions)
        assert total == 9 - 3


class TestAgreement:
    def make(self, pairs):
        mine, gold = {}, {}
        for i, (a, g) in enumerate(pairs):
            mine[i] = Judgment(task_id=i, annotator_id="a",
                               verdict="valid" if a else "rejected",
                               reject_reason=None if a else "other")
            gold[i] = Judgment(task_id=i, annotator_id="c",
                               verdict="valid" if g else "rejected",
                               reject_reason=None if g else "other")
        return mine, gold

    def test_identical_judgments(self):
        mine, gold = self.make([(True, True)] * 6 + [(False, False)] * 4)
        report = agreement(mine, gold)
        assert report.precision == 1.0
        assert report.recall == 1.0
        assert report.cohen_kappa == 1.0

    def test_contrived_confusion_table(self):
        # TP=40 FP=5 FN=5 TN=50, values frozen from the brute-force oracle
        pairs = ([(True, True)] * 40 + [(True, False)] * 5
                 + [(False, True)] * 5 + [(False, False)] * 50)
        report = agreement(*self.make(pairs))
        p, r, kappa = oracles.agreement_brute(pairs)
        assert math.isclose(report.precision, p, abs_tol=1e-12)
        assert math.isclose(report.recall, r, abs_tol=1e-12)
        assert math.isclose(report.cohen_kappa, kappa, abs_tol=1e-12)
        assert math.isclose(report.precision, 8 / 9, abs_tol=1e-12)
        assert math.isclose(report.cohen_kappa, 0.79797979797979, abs_tol=1e-10)

    def test_all_valid_vs_half_gold_is_chance_level(self):
        pairs = [(True, True)] * 5 + [(True, False)] * 5
        report = agreement(*self.make(pairs))
        assert report.cohen_kappa == pytest.approx(0.0)

    def test_kappa_symmetry(self):
        pairs = [(True, True)] * 7 + [(True, False)] * 2 + [(False, True)] * 3 \
            + [(False, False)] * 8
        mine, gold = self.make(pairs)
        forward = agreement(mine, gold)
        backward = agreement(gold, mine)
        assert forward.cohen_kappa == pytest.approx(backward.cohen_kappa)
        assert forward.precision == pytest.approx(backward.recall)

    def test_task_mismatch_errors(self):
        mine, gold = self.make([(True, True)] * 3)
        del gold[2]
        with pytest.raises(ValueError):
            agreement(mine, gold)


@pytest.fixture()
def live_service(fixtures_dir, tmp_path):
    store = TaskStore(tmp_path / "store",
                      candidates_path=fixtures_dir / "golden" / "candidates.jsonl")
    service = ValidationService(store,
                                train_path=fixtures_dir / "golden" / "train.jsonl",
                                out_dir=tmp_path / "exports")
    (tmp_path / "exports").mkdir()
    server = make_server(service, port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"
    yield base, store, tmp_path
    server.shutdown()
    server.server_close()


def http(base, method, path, body=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(base + path, data=data, method=method,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


class TestService:
    def test_full_session_over_http(self, live_service):
        base, store, tmp = live_service
        judged = 0
        while True:
            status, payload = http(base, "GET", "/tasks/next?annotator=ann1")
            assert status == 200
            if payload["done"]:
                break
            task = payload["task"]
            verdict = {"verdict": "valid"}
            if judged == 0:
                verdict = {"verdict": "rejected", "reject_reason": "event_time"}
            status, ack = http(base, "POST", "/judgments",
                               {"task_id": task["task_id"],
                                "annotator_id": "ann1", **verdict})
            assert status == 200 and ack["status"] == "stored"
            judged += 1
        assert judged == 9
        status, progress = http(base, "GET", "/progress")
        assert progress["judged"] == 9

    def test_two_annotators_interleave_independently(self, live_service):
        base, _, _ = live_service
        seen = {"a": [], "b": []}
        for _ in range(3):
            for ann in ("a", "b"):
                _, payload = http(base, "GET", f"/tasks/next?annotator={ann}")
                task = payload["task"]
                seen[ann].append(task["task_id"])
                http(base, "POST", "/judgments",
                     {"task_id": task["task_id"], "annotator_id": ann,
                      "verdict": "valid"})
        assert seen["a"] == seen["b"]  # both walk the full queue

    def test_rejected_without_reason_is_400(self, live_service):
        base, store, _ = live_service
        task = store.next_task("x")
        status, payload = http(base, "POST", "/judgments",
                               {"task_id": task.task_id, "annotator_id": "x",
                                "verdict": "rejected"})
        assert status == 400
        assert "reason" in payload["error"]

    def test_unknown_task_is_400(self, live_service):
        base, _, _ = live_service
        status, _ = http(base, "POST", "/judgments",
                         {"task_id": 999999, "annotator_id": "x",
                          "verdict": "valid"})
        assert status == 400

    def test_export_writes_validated_split_and_purges_train(self, live_service, fixtures_dir):
        base, store, tmp = live_service
        while (task := store.next_task("ann1")) is not None:
            judge(store, task.task_id)
        status, result = http(base, "POST", "/export?split=test")
        assert status == 200
        assert result["exported_mentions"] == 5
        validated = read_mentions(result["path"])
        assert len(validated) == 5
        purged = read_mentions(result["train_purged_path"])
        eval_sources = {m.source_title for m in validated}
        dev = read_mentions(tmp / "exports" / "dev.validated.jsonl") \
            if (tmp / "exports" / "dev.validated.jsonl").exists() else []
        assert all(m.source_title not in eval_sources for m in purged)
        # golden fixture: the Woodstock eval cluster shares two source
        # articles with train, purging 3 of 7 train mentions
        assert result["train_mentions_after_purge"] == 4

    def test_agreement_endpoint(self, live_service):
        base, store, _ = live_service
        for _ in range(4):
            task = store.next_task("ann1")
            judge(store, task.task_id, "ann1")
            judge(store, task.task_id, "consolidator")
        status, report = http(base, "GET", "/agreement?annotator=ann1")
        assert status == 200
        assert report["cohen_kappa"] == 1.0
        assert report["tasks_compared"] == 4


class TestSkipParameter:
    def test_skip_lets_clients_prefetch_past_unsynced_work(self, live_service):
        base, _, _ = live_service
        _, first = http(base, "GET", "/tasks/next?annotator=pf")
        first_id = first["task"]["task_id"]
        _, second = http(base, "GET",
                         f"/tasks/next?annotator=pf&skip={first_id}")
        assert second["task"]["task_id"] != first_id
        # without skip the same task is served again
        _, again = http(base, "GET", "/tasks/next?annotator=pf")
        assert again["task"]["task_id"] == first_id
