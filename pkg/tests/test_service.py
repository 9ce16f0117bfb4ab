from __future__ import annotations

import json
import threading

from fastapi.testclient import TestClient

from zerotod.data import load_multiwoz, mini_corpus_dir
from zerotod.gateway import (
    CompletionRequest,
    CompletionResult,
    FinishReason,
    MatchMode,
    ReplayBackend,
    ReplayTranscript,
    record_transcript,
)
from zerotod.pipeline import PipelineConfig
from zerotod.service import create_app

from .conftest import RuleBasedLlm

CFG = PipelineConfig(max_rounds=3)


def _catalog():
    _, catalog = load_multiwoz(mini_corpus_dir())
    return catalog


def _client(backend=None, **kw) -> TestClient:
    app = create_app(backend or RuleBasedLlm(), _catalog(), CFG, **kw)
    return TestClient(app)


class TestSessionApi:
    def test_create_post_trace_round_trip(self):
        client = _client()
        created = client.post("/api/sessions")
        assert created.status_code == 201
        session_id = created.json()["id"]

        posted = client.post(
            f"/api/sessions/{session_id}/messages",
            json={"text": "any indian restaurants?"},
        )
        assert posted.status_code == 200
        body = posted.json()
        assert body["turn"] == 0
        assert body["response"]

        trace = client.get(f"/api/sessions/{session_id}/trace/0")
        assert trace.status_code == 200
        assert trace.json()["proxy_bs"]
        assert trace.json()["response"] == body["response"]

    def test_deterministic_bodies_under_replay(self):
        fixed_ids = lambda: "session-0"
        recording, transcript = record_transcript(RuleBasedLlm())
        reference_client = _client(recording, id_factory=fixed_ids)
        sid = reference_client.post("/api/sessions").json()["id"]
        first = reference_client.post(
            f"/api/sessions/{sid}/messages", json={"text": "any indian restaurants?"}
        ).json()
        first_trace = reference_client.get(f"/api/sessions/{sid}/trace/0").json()

        bodies = []
        for _ in range(2):
            replay = ReplayBackend(
                ReplayTranscript(list(transcript.entries), match_mode=MatchMode.TAG_SEQUENCE)
            )
            client = _client(replay, id_factory=fixed_ids)
            rid = client.post("/api/sessions").json()["id"]
            assert rid == sid
            response = client.post(
                f"/api/sessions/{rid}/messages", json={"text": "any indian restaurants?"}
            ).json()
            trace = client.get(f"/api/sessions/{rid}/trace/0").json()
            bodies.append((response["response"], json.dumps(trace, sort_keys=True)))
        assert bodies[0] == bodies[1]
        assert bodies[0][0] == first["response"]
        assert bodies[0][1] == json.dumps(first_trace, sort_keys=True)

    def test_unknown_session(self):
        client = _client()
        response = client.post("/api/sessions/nope/messages", json={"text": "hi"})
        assert response.status_code == 404
        assert response.json()["code"] == "UNKNOWN_SESSION"

    def test_empty_message(self):
        client = _client()
        sid = client.post("/api/sessions").json()["id"]
        response = client.post(f"/api/sessions/{sid}/messages", json={"text": "   "})
        assert response.status_code == 400
        assert response.json()["code"] == "EMPTY_MESSAGE"

    def test_unknown_trace(self):
        client = _client()
        sid = client.post("/api/sessions").json()["id"]
        response = client.get(f"/api/sessions/{sid}/trace/0")
        assert response.status_code == 404
        assert response.json()["code"] == "UNKNOWN_TRACE"

    def test_session_isolation(self):
        client = _client()
        sid_a = client.post("/api/sessions").json()["id"]
        sid_b = client.post("/api/sessions").json()["id"]
        client.post(f"/api/sessions/{sid_a}/messages", json={"text": "spanish food please"})
        summaries = {s["id"]: s for s in client.get("/api/sessions").json()}
        assert summaries[sid_a]["turns"] == 1
        assert summaries[sid_b]["turns"] == 0

    def test_list_sessions(self):
        client = _client()
        ids = {client.post("/api/sessions").json()["id"] for _ in range(3)}
        listed = {s["id"] for s in client.get("/api/sessions").json()}
        assert ids <= listed


class TestConcurrency:
    def test_exactly_one_session_busy(self):
        gate_entered = threading.Event()
        gate_release = threading.Event()
        inner = RuleBasedLlm()

        class SlowBackend:
            window_chars = None

            def complete(self, request: CompletionRequest) -> CompletionResult:
                if request.tag == "proxy_bs":
                    gate_entered.set()
                    gate_release.wait(timeout=10)
                return inner.complete(request)

        client = _client(SlowBackend())
        sid = client.post("/api/sessions").json()["id"]
        codes: list[int] = []

        def post():
            response = client.post(
                f"/api/sessions/{sid}/messages", json={"text": "indian food"}
            )
            codes.append(response.status_code)

        slow_thread = threading.Thread(target=post)
        slow_thread.start()
        assert gate_entered.wait(timeout=10)
        fast_thread = threading.Thread(target=post)
        fast_thread.start()
        fast_thread.join(timeout=10)
        gate_release.set()
        slow_thread.join(timeout=10)

        assert sorted(codes) == [200, 409]

    def test_health_under_fifty_concurrent_sessions(self):
        client = _client()
        errors: list[Exception] = []

        def create_and_post(i: int):
            try:
                sid = client.post("/api/sessions").json()["id"]
                response = client.post(
                    f"/api/sessions/{sid}/messages", json={"text": f"need option {i}"}
                )
                assert response.status_code == 200
            except Exception as exc:  # noqa: BLE001
                errors.append(exc)

        threads = [threading.Thread(target=create_and_post, args=(i,)) for i in range(50)]
        for t in threads:
            t.start()
        health = client.get("/healthz")
        assert health.status_code == 200
        assert health.json() == {"status": "ok"}
        for t in threads:
            t.join(timeout=30)
        assert not errors
        assert len(client.get("/api/sessions").json()) == 50


class TestJournalDurability:
    def test_sessions_and_traces_survive_restart(self, tmp_path):
        journal = tmp_path / "journal.jsonl"
        client = _client(journal_path=journal)
        sid = client.post("/api/sessions").json()["id"]
        client.post(f"/api/sessions/{sid}/messages", json={"text": "cheap indian food"})
        before_sessions = client.get("/api/sessions").json()
        before_trace = client.get(f"/api/sessions/{sid}/trace/0").json()

        restarted = _client(journal_path=journal)
        after_sessions = restarted.get("/api/sessions").json()
        after_trace = restarted.get(f"/api/sessions/{sid}/trace/0").json()
        assert json.dumps(after_sessions, sort_keys=True) == json.dumps(before_sessions, sort_keys=True)
        assert json.dumps(after_trace, sort_keys=True) == json.dumps(before_trace, sort_keys=True)
