"""HTTP client for a model sidecar speaking the /v1/align wire protocol.

Request  {"chunks": [str], "sentences": [str]}
Response {"probs": [[[a, n, c], ...C], ...S], "model": str, "version": str}

200 on success, 422 on invalid input (never retried), 5xx and transport
failures retried idempotently with exponential backoff.
"""

from __future__ import annotations

import time

import numpy as np
import requests

from ..engine import AlignmentMatrix
from ..errors import BackendError, InvalidRequestError, ShapeError, TransportError

ALIGN_PATH = "/v1/align"


class RemoteBackend:
    kind = "remote"
    concurrent_safe = True

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        retries: int = 3,
        backoff: float = 0.25,
        pool_size: int = 8,
        session: requests.Session | None = None,
    ):
        base = endpoint.rstrip("/")
        self.url = base if base.endswith(ALIGN_PATH) else base + ALIGN_PATH
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        if session is None:
            session = requests.Session()
            adapter = requests.adapters.HTTPAdapter(
                pool_connections=pool_size, pool_maxsize=pool_size
            )
            session.mount("http://", adapter)
            session.mount("https://", adapter)
        self.session = session
        self._served_by: str | None = None

    def identity(self) -> dict:
        return {"kind": self.kind, "endpoint": self.url}

    def align(self, chunks, sentences, sample_id=None) -> AlignmentMatrix:
        payload = {"chunks": list(chunks), "sentences": list(sentences)}
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                resp = self.session.post(self.url, json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                last_exc = exc
                continue
            if resp.status_code == 200:
                return self._parse(resp, len(sentences), len(chunks))
            if resp.status_code == 422:
                raise InvalidRequestError(f"sidecar rejected request: {resp.text[:500]}")
            if 500 <= resp.status_code < 600:
                last_exc = BackendError(f"sidecar returned {resp.status_code}")
                continue
            raise BackendError(f"unexpected sidecar status {resp.status_code}: {resp.text[:500]}")
        raise TransportError(
            f"align call to {self.url} failed after {self.retries + 1} attempts: {last_exc}"
        )

    def _parse(self, resp, n_sentences: int, n_chunks: int) -> AlignmentMatrix:
        try:
            body = resp.json()
            probs = body["probs"]
            self._served_by = f"{body.get('model')}@{body.get('version')}"
        except (ValueError, KeyError, TypeError) as exc:
            raise BackendError(f"malformed sidecar response: {exc!r}") from exc
        try:
            arr = np.asarray(probs, dtype=np.float64)
        except ValueError as exc:
            raise ShapeError((n_sentences, n_chunks, 3), ("ragged",)) from exc
        if arr.ndim != 3 or arr.shape != (n_sentences, n_chunks, 3):
            raise ShapeError((n_sentences, n_chunks, 3), arr.shape)
        return AlignmentMatrix.from_array(arr)
