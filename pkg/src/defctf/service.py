"""HTTP service: packs, sessions, submissions, hints, scoreboard.

JSON over HTTP/1.1 under ``/api/v1`` with opaque bearer tokens. All events
of one session funnel through one lock; the event log is fsynced before any
response leaves, and every mutating request may carry the last ``seq`` the
client saw — a stale seq is rejected with 409 instead of applied twice.

Startup is fail-fast: an invalid pack or a missing server secret refuses to
serve rather than running degraded.
"""

from __future__ import annotations

import secrets as _secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .grading import MalformedSubmission, VariantMismatch, submission_from_dict
from .model import Challenge, ChallengePack, EXPLAIN_BRANCHES
from .packio import load_pack
from .presentation import SubmissionOutOfRange
from .scoreboard import build_scoreboard
from .session import (
    Session,
    WrongStage,
    acknowledge,
    replay,
    request_hint,
    start_session,
    submit,
)
from .storage import EventStore
from .views import player_view


class ConfigError(ValueError):
    """The service configuration cannot produce a working service."""


@dataclass
class ServiceConfig:
    pack_paths: list[Path] = field(default_factory=list)
    packs: list[ChallengePack] = field(default_factory=list)
    server_secret: str = ""
    storage_dir: Path = Path("./defctf-data")
    tokens: dict[str, str] = field(default_factory=dict)  # bearer token -> player_id
    port: int = 8000
    host: str = "127.0.0.1"
    clock: Callable[[], float] = time.time
    ui_dir: Optional[Path] = None  # when set, serve the built web client at /


class _ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message})


class ServiceState:
    """Loaded packs plus the session registry and its locks."""

    def __init__(self, config: ServiceConfig):
        if not config.server_secret:
            raise ConfigError("server secret is required (refusing to issue forgeable flags)")
        self.config = config
        self.challenges: dict[str, Challenge] = {}
        packs = list(config.packs)
        for path in config.pack_paths:
            packs.append(load_pack(str(path)))  # ParseError/FixtureError propagate
        if not packs:
            raise ConfigError("no packs configured")
        for pack in packs:
            for challenge in pack.challenges:
                if challenge.id in self.challenges:
                    raise ConfigError(f"challenge id {challenge.id!r} appears in more than one pack")
                self.challenges[challenge.id] = challenge
        self.store = EventStore(config.storage_dir)
        self.sessions: dict[str, Session] = {}
        self._store_lock = threading.Lock()
        self._session_locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._recover()

    def _recover(self) -> None:
        for session_id in self.store.session_ids():
            challenge_id = self.store.challenge_id_of(session_id)
            if challenge_id is None or challenge_id not in self.challenges:
                continue  # session for a pack no longer served; keep its log, skip it
            events = self.store.events(session_id)
            assert events is not None
            self.sessions[session_id] = replay(events, self.challenges[challenge_id])

    def session_lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._session_locks.setdefault(session_id, threading.Lock())

    def logical_clock(self, session: Session) -> int:
        elapsed = int(self.config.clock() - session.started_at)
        return max(session.clock, elapsed)

    def commit(self, after: Session, from_seq: int) -> None:
        """Durably append events past ``from_seq``, then publish the state."""
        new_events = list(after.events[from_seq:])
        if not new_events:
            return
        with self._store_lock:
            try:
                self.store.append(after.session_id, new_events)
            except OSError as exc:
                raise _ApiError(503, "storage_unavailable", f"could not persist events: {exc}") from exc
        self.sessions[after.session_id] = after


def create_app(config: ServiceConfig) -> FastAPI:
    state = ServiceState(config)
    app = FastAPI(title="defctf", docs_url=None, redoc_url=None)
    app.state.defctf = state

    # tokens travel in the Authorization header (no cookies), so a permissive
    # CORS policy lets the web client be hosted anywhere
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["Authorization", "Content-Type"],
    )

    @app.exception_handler(_ApiError)
    async def handle_api_error(request: Request, exc: _ApiError) -> JSONResponse:
        return _error(exc.status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        return _error(400, "malformed", "request body is not valid JSON")

    def authed_player(request: Request) -> str:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise _ApiError(401, "unauthorized", "missing bearer token")
        token = header[7:].strip()
        player = state.config.tokens.get(token)
        if player is None:
            raise _ApiError(401, "unauthorized", "unknown token")
        return player

    async def json_body(request: Request) -> dict:
        try:
            data = await request.json()
        except Exception:
            raise _ApiError(400, "malformed", "request body is not valid JSON") from None
        if not isinstance(data, dict):
            raise _ApiError(400, "malformed", "request body must be a JSON object")
        return data

    def owned_session(session_id: str, player: str) -> Session:
        session = state.sessions.get(session_id)
        if session is None or session.player_id != player:
            raise _ApiError(404, "not_found", f"no session {session_id!r}")
        return session

    def check_seq(session: Session, body: dict) -> None:
        expected = body.get("seq")
        if expected is None:
            return
        if isinstance(expected, bool) or not isinstance(expected, int):
            raise _ApiError(400, "malformed", "seq must be an integer")
        if expected != session.seq:
            raise _ApiError(
                409, "conflict", f"session is at seq {session.seq}, request expected {expected}"
            )

    def envelope(session: Session, **extra: object) -> dict:
        challenge = state.challenges[session.challenge_id]
        out = {
            "session_id": session.session_id,
            "seq": session.seq,
            "view": player_view(session, challenge).to_dict(),
        }
        out.update(extra)
        return out

    @app.get("/api/v1/challenges")
    def list_challenges(request: Request) -> list[dict]:
        authed_player(request)
        return [
            {
                "id": c.id,
                "title": c.title,
                "type": c.type.value,
                "base_points": c.base_points,
            }
            for c in state.challenges.values()
        ]

    @app.post("/api/v1/sessions")
    async def open_session(request: Request) -> dict:
        player = authed_player(request)
        body = await json_body(request)
        challenge_id = body.get("challenge_id")
        if not isinstance(challenge_id, str):
            raise _ApiError(400, "malformed", "challenge_id is required")
        challenge = state.challenges.get(challenge_id)
        if challenge is None:
            raise _ApiError(404, "not_found", f"no challenge {challenge_id!r}")
        seed = body.get("seed")
        if seed is None:
            seed = _secrets.randbits(32)
        elif not isinstance(seed, int) or isinstance(seed, bool):
            raise _ApiError(400, "malformed", "seed must be an integer")
        session = start_session(
            challenge, player_id=player, seed=seed, started_at=state.config.clock()
        )
        with state.session_lock(session.session_id):
            state.commit(session, from_seq=0)
        return envelope(session)

    @app.get("/api/v1/sessions/{session_id}")
    def get_session(session_id: str, request: Request) -> dict:
        player = authed_player(request)
        session = owned_session(session_id, player)
        return envelope(session)

    @app.post("/api/v1/sessions/{session_id}/answer")
    async def answer(session_id: str, request: Request) -> dict:
        player = authed_player(request)
        body = await json_body(request)
        with state.session_lock(session_id):
            session = owned_session(session_id, player)
            check_seq(session, body)
            try:
                submission = submission_from_dict(body.get("submission"))
            except MalformedSubmission as exc:
                raise _ApiError(400, "malformed", str(exc)) from exc
            challenge = state.challenges[session.challenge_id]
            try:
                result = submit(
                    session,
                    challenge,
                    submission,
                    clock=state.logical_clock(session),
                    server_secret=state.config.server_secret,
                )
            except WrongStage as exc:
                raise _ApiError(422, "wrong_stage", str(exc)) from exc
            except VariantMismatch as exc:
                raise _ApiError(422, "variant_mismatch", str(exc)) from exc
            except SubmissionOutOfRange as exc:
                raise _ApiError(400, "malformed", str(exc)) from exc
            state.commit(result.session, from_seq=session.seq)
        verdict = result.verdict
        extra: dict = {
            "verdict": "accepted" if verdict.accepted else "rejected",
            "feedback": list(verdict.feedback),
        }
        if _may_reveal_detail(challenge, verdict.accepted) and verdict.detail is not None:
            extra["detail"] = verdict.detail
        return envelope(result.session, **extra)

    @app.post("/api/v1/sessions/{session_id}/hint")
    async def hint(session_id: str, request: Request) -> dict:
        player = authed_player(request)
        body = await json_body(request)
        with state.session_lock(session_id):
            session = owned_session(session_id, player)
            check_seq(session, body)
            challenge = state.challenges[session.challenge_id]
            try:
                grant = request_hint(session, challenge, clock=state.logical_clock(session))
            except WrongStage as exc:
                raise _ApiError(422, "wrong_stage", str(exc)) from exc
            state.commit(grant.session, from_seq=session.seq)
        if grant.hint is None:
            return envelope(grant.session, hint="locked", cost=0, unlock_hint=grant.locked_reason)
        extra: dict = {"hint": grant.hint.text, "cost": grant.hint.cost, "hint_id": grant.hint.hint_id}
        if grant.hint.url is not None:
            extra["url"] = grant.hint.url
        return envelope(grant.session, **extra)

    @app.post("/api/v1/sessions/{session_id}/ack")
    async def ack(session_id: str, request: Request) -> dict:
        player = authed_player(request)
        body = await json_body(request)
        with state.session_lock(session_id):
            session = owned_session(session_id, player)
            check_seq(session, body)
            challenge = state.challenges[session.challenge_id]
            try:
                updated = acknowledge(
                    session,
                    challenge,
                    clock=state.logical_clock(session),
                    server_secret=state.config.server_secret,
                )
            except WrongStage as exc:
                raise _ApiError(422, "wrong_stage", str(exc)) from exc
            state.commit(updated, from_seq=session.seq)
        return envelope(updated)

    @app.get("/api/v1/scoreboard")
    def scoreboard(request: Request) -> list[dict]:
        authed_player(request)
        with state._store_lock:
            entries = build_scoreboard(state.store.finished_records())
        return [
            {
                "player_id": e.player_id,
                "solved": e.solved,
                "total_score": e.total_score,
                "last_solve": e.last_solve_order,
            }
            for e in entries
        ]

    if config.ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        if not (config.ui_dir / "index.html").exists():
            raise ConfigError(f"ui dir {config.ui_dir} has no index.html (build the frontend first)")
        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app


def _may_reveal_detail(challenge: Challenge, accepted: bool) -> bool:
    """Aggregate diff counts are withheld when a wrong answer sends the
    player straight back to the challenge; explain branches may show them."""
    return accepted or challenge.wrong_branch.policy in EXPLAIN_BRANCHES


def serve(config: ServiceConfig) -> None:
    """Validate config and packs, then run the service until interrupted."""
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
