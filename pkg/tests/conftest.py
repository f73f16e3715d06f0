"""Shared test fixtures: a scriptable in-process sidecar stub."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest


class SidecarStubHandler(BaseHTTPRequestHandler):
    """Scriptable /v1/align stub; set `behavior` on the class to steer it."""

    behavior = "ok"
    fail_next = 0

    def log_message(self, *args):
        pass

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        cls = type(self)
        if cls.behavior == "flaky" and cls.fail_next > 0:
            cls.fail_next -= 1
            self.send_response(503)
            self.end_headers()
            return
        if cls.behavior == "reject":
            self.send_response(422)
            self.end_headers()
            self.wfile.write(b"bad input")
            return
        sentences, chunks = body["sentences"], body["chunks"]
        if cls.behavior == "wrong-shape":
            probs = [[[1.0, 0.0, 0.0]]]
        elif cls.behavior == "bad-rows":
            probs = [[[0.7, 0.7, 0.7] for _ in chunks] for _ in sentences]
        else:
            probs = [[[0.8, 0.1, 0.1] for _ in chunks] for _ in sentences]
        payload = json.dumps({"probs": probs, "model": "stub-nli", "version": "1"})
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(payload.encode())


class StubHandle:
    def __init__(self, url: str):
        self.url = url

    def set(self, behavior: str, fail_next: int = 0) -> None:
        SidecarStubHandler.behavior = behavior
        SidecarStubHandler.fail_next = fail_next


@pytest.fixture()
def sidecar_stub():
    """Serve the stub on an ephemeral port; yields a handle with .url/.set()."""
    server = ThreadingHTTPServer(("127.0.0.1", 0), SidecarStubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    SidecarStubHandler.behavior = "ok"
    SidecarStubHandler.fail_next = 0
    yield StubHandle(f"http://127.0.0.1:{server.server_address[1]}")
    server.shutdown()
