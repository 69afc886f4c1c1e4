"""HTTP/JSON facade over the memory engine.

Endpoints:

    POST   /v1/dialogue             one dialogue turn through the pipeline
    DELETE /v1/contributions/{id}   right-to-be-forgotten cascade
    POST   /v1/admin/tick           advance the simulated clock {"days": n}
    GET    /v1/avatar               current embodied expression state
    GET    /v1/memories?status=     fragments, optionally filtered by status
    GET    /v1/summaries            self-awareness summaries with stale flags
    GET    /v1/bundles/{id}         a stored context bundle (for 502 retries)

Time never advances on its own; a deployment that wants wall-clock cycles
drives POST /v1/admin/tick from a scheduler.
"""

from __future__ import annotations

import logging

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import EngineConfig
from .engine import MemoryEngine
from .errors import (
    DialogueClientError,
    EmptyUtteranceError,
    NotFoundError,
    TickInProgressError,
    UnknownPlaceError,
    UnknownSessionError,
)

logger = logging.getLogger(__name__)


class DialogueBody(BaseModel):
    session_id: str = ""
    text: str | None = None
    caption: str | None = None
    location: str | None = None
    emotion: float | None = None
    allow_unresolved_place: bool = False


class TickBody(BaseModel):
    days: int = 1


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def create_app(engine: MemoryEngine) -> FastAPI:
    app = FastAPI(title="collective-memory", version="0.1.0")
    app.state.engine = engine

    @app.post("/v1/dialogue")
    def dialogue(body: DialogueBody):
        try:
            outcome = engine.handle_dialogue(
                body.session_id,
                text=body.text,
                caption=body.caption,
                location=body.location,
                emotion=body.emotion,
                allow_unresolved_place=body.allow_unresolved_place,
            )
        except TickInProgressError as exc:
            return _error(409, str(exc))
        except (EmptyUtteranceError, UnknownSessionError, UnknownPlaceError, ValueError) as exc:
            return _error(400, str(exc))
        except DialogueClientError as exc:
            return _error(502, str(exc), bundle_id=exc.bundle_id)
        return JSONResponse(outcome.to_dict())

    @app.delete("/v1/contributions/{contribution_id}")
    def delete_contribution(contribution_id: str):
        try:
            receipt = engine.delete_contribution(contribution_id)
        except NotFoundError as exc:
            return _error(404, str(exc))
        return JSONResponse(receipt.to_dict())

    @app.post("/v1/admin/tick")
    def admin_tick(body: TickBody):
        try:
            report = engine.tick(body.days)
        except TickInProgressError as exc:
            return _error(409, str(exc))
        except ValueError as exc:
            return _error(400, str(exc))
        return JSONResponse(report.to_dict())

    @app.get("/v1/avatar")
    def avatar():
        return JSONResponse(engine.avatar().to_dict())

    @app.get("/v1/memories")
    def memories(status: str | None = None):
        try:
            fragments = engine.memories(status)
        except ValueError as exc:
            return _error(400, str(exc))
        return JSONResponse({"memories": fragments})

    @app.get("/v1/summaries")
    def summaries():
        return JSONResponse({"summaries": engine.summaries()})

    @app.get("/v1/bundles/{bundle_id}")
    def bundle(bundle_id: str):
        try:
            found = engine.get_bundle(bundle_id)
        except NotFoundError as exc:
            return _error(404, str(exc))
        return JSONResponse(found.to_dict())

    return app


def serve(config: EngineConfig, host: str = "127.0.0.1", port: int | None = None) -> None:
    """Run the service with uvicorn (blocking)."""
    import uvicorn

    engine = MemoryEngine(config)
    app = create_app(engine)
    uvicorn.run(app, host=host, port=port if port is not None else config.port, log_level="info")
