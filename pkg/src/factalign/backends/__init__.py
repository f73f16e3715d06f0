"""Pluggable alignment backends: lexical oracle, fixture replay, remote client."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from ..engine import AlignmentMatrix
from ..errors import ConfigError
from ..segment import TokenizerSpec
from .fixture import FixtureBackend
from .lexical import LexicalBackend
from .remote import RemoteBackend


@runtime_checkable
class ScorerBackend(Protocol):
    kind: str
    concurrent_safe: bool

    def align(self, chunks: list[str], sentences: list[str], sample_id=None) -> AlignmentMatrix: ...

    def identity(self) -> dict: ...


def make_backend(
    kind: str,
    *,
    spec: TokenizerSpec | None = None,
    fixture_path=None,
    endpoint: str | None = None,
    timeout: float = 30.0,
    retries: int = 3,
):
    """Construct a backend from CLI-level options."""
    if kind == "lexical":
        return LexicalBackend(spec)
    if kind == "fixture":
        if fixture_path is None:
            raise ConfigError("fixture backend requires a fixture path")
        return FixtureBackend.from_path(fixture_path)
    if kind == "remote":
        if not endpoint:
            raise ConfigError("remote backend requires an endpoint")
        return RemoteBackend(endpoint, timeout=timeout, retries=retries)
    raise ConfigError(f"unknown backend kind {kind!r}")


__all__ = [
    "ScorerBackend",
    "LexicalBackend",
    "FixtureBackend",
    "RemoteBackend",
    "make_backend",
]
