"""Session-scoped HTTP API with a server-push event channel.

Each session owns one document. Mutations are serialized per session in
request arrival order; subscribers on ``/events`` receive the session's full
event log from sequence 0 as server-sent events (one JSON event per message),
then live events as they happen.
"""

from __future__ import annotations

import asyncio
import json
import secrets
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .engine import BadAction, Engine
from .errors import (
    EngineError,
    MalformedDocument,
    NoMatch,
    UnknownComponentType,
    UnsupportedVersion,
)

# Rejections that mean "the request was well-formed but the graph says no".
_CONFLICT = 409
# Rejections where the payload itself cannot be interpreted.
_UNPROCESSABLE = 422


def _status_for(exc: EngineError) -> int:
    if isinstance(exc, (NoMatch, BadAction, MalformedDocument, UnsupportedVersion,
                        UnknownComponentType)):
        return _UNPROCESSABLE
    return _CONFLICT


def _error_body(exc: EngineError) -> dict:
    body = {"error": {"code": exc.code, "message": str(exc)}}
    if isinstance(exc, NoMatch) and exc.hint:
        body["error"]["hint"] = exc.hint
    return body


@dataclass
class Session:
    engine: Engine
    lock: threading.Lock = field(default_factory=threading.Lock)


def create_app(ui_dir: str | Path | None = None) -> FastAPI:
    """API app; pass a directory (the built web client) to also serve it at /."""
    app = FastAPI(title="paramflow", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    app.state.sessions = sessions

    def session_or_none(session_id: str) -> Session | None:
        return sessions.get(session_id)

    def not_found() -> JSONResponse:
        return JSONResponse(
            {"error": {"code": "UnknownSession", "message": "no such session"}},
            status_code=404,
        )

    @app.post("/sessions")
    def create_session() -> dict:
        session_id = secrets.token_hex(8)
        sessions[session_id] = Session(Engine())
        return {"session_id": session_id}

    @app.put("/sessions/{session_id}/document")
    async def load_document(session_id: str, request: Request):
        session = session_or_none(session_id)
        if session is None:
            return not_found()
        data = await request.body()
        with session.lock:
            try:
                session.engine.load_document(data)
            except EngineError as exc:
                return JSONResponse(_error_body(exc), status_code=_UNPROCESSABLE)
            snapshot = session.engine.graph_snapshot()
        return {"status": "ok", "nodes": len(snapshot["nodes"]), "edges": len(snapshot["edges"])}

    @app.get("/sessions/{session_id}/document")
    def get_document(session_id: str):
        session = session_or_none(session_id)
        if session is None:
            return not_found()
        with session.lock:
            data = session.engine.save_document()
        return Response(content=data, media_type="application/json")

    @app.post("/sessions/{session_id}/commands")
    async def apply_command(session_id: str, request: Request):
        session = session_or_none(session_id)
        if session is None:
            return not_found()
        try:
            body = json.loads(await request.body())
        except (json.JSONDecodeError, UnicodeDecodeError):
            return JSONResponse(
                {"error": {"code": "BadRequest", "message": "body must be JSON"}},
                status_code=400,
            )
        if not isinstance(body, dict) or set(body) - {"phrase", "action"} or \
                ("phrase" in body) == ("action" in body):
            return JSONResponse(
                {"error": {"code": "BadRequest",
                           "message": "body must carry exactly one of 'phrase' or 'action'"}},
                status_code=400,
            )
        with session.lock:
            try:
                if "phrase" in body:
                    if not isinstance(body["phrase"], str):
                        return JSONResponse(
                            {"error": {"code": "BadRequest", "message": "phrase must be a string"}},
                            status_code=400,
                        )
                    outcome = session.engine.apply_phrase(body["phrase"])
                else:
                    outcome = session.engine.apply_action(body["action"])
            except EngineError as exc:
                return JSONResponse(_error_body(exc), status_code=_status_for(exc))
            response: dict = {"status": "ok", "seq": session.engine.events[-1].seq}
            if outcome.created_id is not None:
                response["created"] = outcome.created_id
        return response

    @app.get("/sessions/{session_id}/graph")
    def get_state(session_id: str):
        session = session_or_none(session_id)
        if session is None:
            return not_found()
        with session.lock:
            return session.engine.graph_snapshot()

    @app.get("/sessions/{session_id}/geometry")
    def get_geometry(session_id: str, request: Request):
        session = session_or_none(session_id)
        if session is None:
            return not_found()
        accept = request.headers.get("accept", "")
        with session.lock:
            if "model/obj" in accept:
                return Response(content=session.engine.geometry_obj(), media_type="model/obj")
            return {"meshes": session.engine.geometry_json()}

    @app.get("/sessions/{session_id}/grammar")
    def get_grammar(session_id: str):
        session = session_or_none(session_id)
        if session is None:
            return not_found()
        with session.lock:
            return {
                "phrases": session.engine.grammar.phrase_templates(),
                "component_types": session.engine.grammar.component_type_names(),
            }

    @app.get("/sessions/{session_id}/events")
    async def subscribe(session_id: str, request: Request, limit: int | None = None):
        session = session_or_none(session_id)
        if session is None:
            return not_found()

        async def stream():
            sent = 0
            while True:
                events = session.engine.events
                while sent < len(events):
                    yield f"data: {json.dumps(events[sent].to_json())}\n\n"
                    sent += 1
                    if limit is not None and sent >= limit:
                        return
                if await request.is_disconnected():
                    return
                await asyncio.sleep(0.02)

        return StreamingResponse(stream(), media_type="text/event-stream")

    if ui_dir is not None:
        # mounted last so the API routes above keep precedence
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


app = create_app()
