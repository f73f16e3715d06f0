"""FastAPI application speaking the /v1/align wire protocol.

POST /v1/align  {"chunks": [str], "sentences": [str]}
             -> {"probs": [[[a, n, c], ...C], ...S], "model": str, "version": str}
GET  /healthz -> {"status": "ok", "model": str, "version": str}

422 on invalid input, 500 on model failure, 503 when the bounded work queue
is saturated. An X-Request-Id header, when sent, is echoed back.
"""

from __future__ import annotations

import logging
import threading

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import PROTOCOL_VERSION, __version__
from .config import SidecarConfig
from .models import load_model

logger = logging.getLogger(__name__)


class AlignRequest(BaseModel):
    chunks: list[str] = Field(min_length=1)
    sentences: list[str] = Field(min_length=1)


def create_app(config: SidecarConfig | None = None, model=None) -> FastAPI:
    config = config or SidecarConfig()
    if model is None:
        model = load_model(config)

    app = FastAPI(title="factalign-sidecar", version=__version__)
    # single model instance: one inference at a time, bounded admission
    model_lock = threading.Lock()
    slots = threading.Semaphore(config.max_concurrency)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "model": model.model_id, "version": __version__}

    @app.post("/v1/align")
    def align(payload: AlignRequest, request: Request, response: Response):
        request_id = request.headers.get("x-request-id")
        if request_id:
            response.headers["x-request-id"] = request_id
        if not slots.acquire(blocking=False):
            return JSONResponse(
                status_code=503,
                content={"error": "queue saturated, retry later"},
                headers={"x-request-id": request_id} if request_id else None,
            )
        try:
            pairs = [
                (chunk, sentence)
                for sentence in payload.sentences
                for chunk in payload.chunks
            ]
            with model_lock:
                rows = model.predict(pairs)
            n_chunks = len(payload.chunks)
            probs = [
                rows[i * n_chunks : (i + 1) * n_chunks].tolist()
                for i in range(len(payload.sentences))
            ]
            return {"probs": probs, "model": model.model_id, "version": PROTOCOL_VERSION}
        except Exception:
            logger.exception("inference failed (request id %s)", request_id)
            return JSONResponse(
                status_code=500,
                content={"error": "model failure"},
                headers={"x-request-id": request_id} if request_id else None,
            )
        finally:
            slots.release()

    return app
