"""Replay backend: recorded alignment matrices keyed by sample id."""

from __future__ import annotations

import json
from pathlib import Path

from ..engine import AlignmentMatrix
from ..errors import DataError, FixtureKeyError


class FixtureBackend:
    """Returns recorded matrices verbatim; all invariants validated at load."""

    kind = "fixture"
    concurrent_safe = True

    def __init__(self, matrices: dict[str, AlignmentMatrix], source: str = "<memory>"):
        self.matrices = matrices
        self.source = source

    @classmethod
    def from_path(cls, path: str | Path) -> "FixtureBackend":
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise DataError(f"fixture file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise DataError(f"fixture file {path} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise DataError(f"fixture file {path} must map sample ids to matrices")
        matrices = {key: AlignmentMatrix.from_array(value) for key, value in raw.items()}
        return cls(matrices, source=str(path))

    @classmethod
    def record(cls, path: str | Path, matrices: dict[str, AlignmentMatrix]) -> None:
        payload = {key: m.probs.tolist() for key, m in matrices.items()}
        Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")

    def identity(self) -> dict:
        return {"kind": self.kind, "source": self.source}

    def align(self, chunks, sentences, sample_id=None) -> AlignmentMatrix:
        if sample_id is None or sample_id not in self.matrices:
            raise FixtureKeyError(sample_id)
        return self.matrices[sample_id]
