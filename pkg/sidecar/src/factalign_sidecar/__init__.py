"""Inference sidecar for chunk/sentence alignment scoring.

Serves POST /v1/align and GET /healthz. The alignment model is pluggable:
a pretrained 3-way NLI classifier (transformers) or a deterministic
token-overlap model for offline operation and CI.
"""

__version__ = "0.1.0"
PROTOCOL_VERSION = "v1"
