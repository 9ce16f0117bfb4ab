"""HTTP session service exposing the dialogue pipeline.

Sessions are in-memory with an optional append-only JSONL journal; enabling
the journal makes sessions and traces survive a restart. One message is
processed per session at a time (concurrent posts get 409 SESSION_BUSY);
distinct sessions run concurrently over the shared immutable catalog.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .dialogue import DialogueContext, Speaker
from .gateway.base import Backend
from .kb.catalog import KbCatalog
from .pipeline.trace import TurnTrace
from .pipeline.turn import PipelineConfig, TurnAborted, run_turn


class MessageIn(BaseModel):
    text: str = ""


@dataclass
class Session:
    id: str
    context: DialogueContext
    traces: list[TurnTrace] = field(default_factory=list)
    created_at: float = 0.0
    last_active: float = 0.0
    config_snapshot: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def summary(self) -> dict:
        return {
            "id": self.id,
            "turns": len(self.traces),
            "created_at": self.created_at,
            "last_active": self.last_active,
            "context": [[t.speaker.value, t.text] for t in self.context.turns],
        }


class SessionStore:
    def __init__(
        self,
        journal_path: str | Path | None = None,
        id_factory=None,
    ) -> None:
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()
        self._journal_path = Path(journal_path) if journal_path else None
        self._journal_lock = threading.Lock()
        self._id_factory = id_factory or (lambda: secrets.token_urlsafe(8))
        if self._journal_path and self._journal_path.exists():
            self._restore()

    def _journal(self, event: dict) -> None:
        if self._journal_path is None:
            return
        with self._journal_lock:
            with open(self._journal_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, ensure_ascii=False))
                fh.write("\n")
                fh.flush()

    def _restore(self) -> None:
        assert self._journal_path is not None
        with open(self._journal_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                if event["event"] == "create":
                    session = Session(
                        id=event["id"],
                        context=DialogueContext((), event["id"]),
                        created_at=event["created_at"],
                        last_active=event["created_at"],
                        config_snapshot=event.get("config", {}),
                    )
                    self._sessions[session.id] = session
                elif event["event"] == "turn":
                    session = self._sessions[event["id"]]
                    trace = TurnTrace.from_json_dict(event["trace"])
                    session.context = session.context.with_turn(
                        Speaker.USER, event["user_text"]
                    ).with_turn(Speaker.SYSTEM, trace.response)
                    session.traces.append(trace)
                    session.last_active = event["at"]

    def create(self, config_snapshot: dict) -> Session:
        now = time.time()
        with self._registry_lock:
            while True:
                session_id = self._id_factory()
                if session_id not in self._sessions:
                    break
            session = Session(
                id=session_id,
                context=DialogueContext((), session_id),
                created_at=now,
                last_active=now,
                config_snapshot=dict(config_snapshot),
            )
            self._sessions[session_id] = session
        self._journal({"event": "create", "id": session_id, "created_at": now, "config": config_snapshot})
        return session

    def get(self, session_id: str) -> Session | None:
        with self._registry_lock:
            return self._sessions.get(session_id)

    def record_turn(self, session: Session, user_text: str, trace: TurnTrace) -> None:
        now = time.time()
        session.context = session.context.with_turn(Speaker.USER, user_text).with_turn(
            Speaker.SYSTEM, trace.response
        )
        session.traces.append(trace)
        session.last_active = now
        self._journal(
            {
                "event": "turn",
                "id": session.id,
                "user_text": user_text,
                "response": trace.response,
                "trace": trace.to_json_dict(),
                "at": now,
            }
        )

    def summaries(self) -> list[dict]:
        with self._registry_lock:
            sessions = sorted(self._sessions.values(), key=lambda s: s.created_at)
            return [s.summary() for s in sessions]


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, "code": code, **extra})


def create_app(
    backend: Backend,
    catalog: KbCatalog,
    pipeline_cfg: PipelineConfig | None = None,
    journal_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
    config_snapshot: dict | None = None,
    cors_origins: list[str] | None = None,
    id_factory=None,
) -> FastAPI:
    cfg = pipeline_cfg or PipelineConfig()
    snapshot = config_snapshot or {}
    store = SessionStore(journal_path, id_factory=id_factory)
    app = FastAPI(title="zerotod chat service")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/healthz")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/sessions", status_code=201)
    def create_session() -> dict:
        session = store.create(snapshot)
        return {"id": session.id}

    @app.get("/api/sessions")
    def list_sessions() -> list[dict]:
        return store.summaries()

    @app.post("/api/sessions/{session_id}/messages")
    def post_message(session_id: str, message: MessageIn):
        session = store.get(session_id)
        if session is None:
            return _error(404, "UNKNOWN_SESSION", f"no session {session_id!r}")
        if not message.text.strip():
            return _error(400, "EMPTY_MESSAGE", "message text must be non-empty")
        if not session.lock.acquire(blocking=False):
            return _error(409, "SESSION_BUSY", "session is already processing a message")
        try:
            context = session.context.with_turn(Speaker.USER, message.text)
            try:
                trace = run_turn(backend, context, catalog, cfg)
            except TurnAborted as exc:
                return _error(500, "PIPELINE_ERROR", str(exc), trace_so_far=exc.partial)
            store.record_turn(session, message.text, trace)
            return {"response": trace.response, "turn": len(session.traces) - 1}
        finally:
            session.lock.release()

    @app.get("/api/sessions/{session_id}/trace/{turn}")
    def get_trace(session_id: str, turn: int):
        session = store.get(session_id)
        if session is None:
            return _error(404, "UNKNOWN_SESSION", f"no session {session_id!r}")
        if turn < 0 or turn >= len(session.traces):
            return _error(404, "UNKNOWN_TRACE", f"no trace for turn {turn}")
        return session.traces[turn].to_json_dict()

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
