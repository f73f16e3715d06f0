"""Max-then-mean aggregation of alignment matrices into consistency scores.

The engine is stateless. For each claim sentence the highest aligned
probability across context chunks is selected; the per-sentence maxima are
averaged (compensated summation in fixed sentence order, so parallelism can
never perturb the result).
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import ConsistencyScore
from .errors import DegenerateInputError, FactalignError, MatrixInvariantError, ShapeError
from .segment import TokenizerSpec, segment_pair

ROW_SUM_TOLERANCE = 1e-4


@dataclass(frozen=True)
class AlignmentMatrix:
    """S x C grid of (aligned, neutral, contradiction) probability rows."""

    probs: np.ndarray

    @classmethod
    def from_array(cls, probs: np.ndarray) -> "AlignmentMatrix":
        probs = np.asarray(probs, dtype=np.float64)
        if probs.ndim != 3 or probs.shape[2] != 3:
            raise ShapeError(("S", "C", 3), probs.shape)
        if probs.shape[0] < 1 or probs.shape[1] < 1:
            raise DegenerateInputError(
                f"alignment matrix needs at least one sentence and one chunk, got {probs.shape[:2]}"
            )
        if np.any(probs < 0.0):
            raise MatrixInvariantError("alignment probabilities must be nonnegative")
        sums = probs.sum(axis=2)
        if np.any(np.abs(sums - 1.0) > ROW_SUM_TOLERANCE):
            worst = float(np.max(np.abs(sums - 1.0)))
            raise MatrixInvariantError(
                f"alignment rows must sum to 1 within {ROW_SUM_TOLERANCE}, worst deviation {worst:g}"
            )
        return cls(probs)

    @property
    def n_sentences(self) -> int:
        return self.probs.shape[0]

    @property
    def n_chunks(self) -> int:
        return self.probs.shape[1]


@dataclass(frozen=True)
class ScoreBreakdown:
    """Per-sentence maxima, the chunk attaining each, and the overall score."""

    per_sentence_max: list[float]
    best_chunk_index: list[int]
    overall: ConsistencyScore


@dataclass(frozen=True)
class RecordError:
    """Per-record failure collected by score_batch instead of failing fast."""

    sample_id: str | None
    kind: str
    message: str


def _compensated_mean(values: Sequence[float]) -> float:
    # Neumaier summation in fixed index order; bit-reproducible.
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return (total + comp) / len(values)


def aggregate(matrix: AlignmentMatrix) -> ScoreBreakdown:
    """Select the max aligned probability per sentence, then average."""
    probs = matrix.probs
    if probs.shape[0] < 1 or probs.shape[1] < 1:
        raise DegenerateInputError("cannot aggregate an empty alignment matrix")
    aligned = probs[:, :, 0]
    best = np.argmax(aligned, axis=1)  # argmax returns the lowest index on ties
    per_sentence = [float(aligned[i, best[i]]) for i in range(aligned.shape[0])]
    overall = _compensated_mean(per_sentence)
    return ScoreBreakdown(
        per_sentence_max=per_sentence,
        best_chunk_index=[int(b) for b in best],
        overall=ConsistencyScore(overall),
    )


def score_pair(
    context: str,
    claim: str,
    backend,
    spec: TokenizerSpec | None = None,
    sample_id: str | None = None,
) -> ScoreBreakdown:
    """Score one (context, claim) pair with the given backend."""
    spec = spec or TokenizerSpec()
    segmented = segment_pair(context, claim, spec)
    if not segmented.sentences:
        raise DegenerateInputError("claim is empty after sentence splitting")
    if not segmented.chunks:
        raise DegenerateInputError("context is empty after chunking")
    matrix = backend.align(segmented.chunks, segmented.sentences, sample_id=sample_id)
    if matrix.n_sentences != len(segmented.sentences) or matrix.n_chunks != len(segmented.chunks):
        raise ShapeError(
            (len(segmented.sentences), len(segmented.chunks), 3), matrix.probs.shape
        )
    return aggregate(matrix)


def score_batch(
    records: Iterable[tuple],
    backend,
    spec: TokenizerSpec | None = None,
    parallelism: int = 1,
) -> list[ScoreBreakdown | RecordError]:
    """Score (context, claim[, sample_id]) records, preserving input order.

    Per-record errors are collected as RecordError entries rather than
    aborting the batch. Output is bit-identical for any parallelism level.
    """
    if parallelism < 1:
        raise DegenerateInputError(f"parallelism must be >= 1, got {parallelism}")
    spec = spec or TokenizerSpec()
    items = []
    for rec in records:
        if len(rec) == 2:
            context, claim = rec
            sample_id = None
        else:
            context, claim, sample_id = rec
        items.append((context, claim, sample_id))

    lock = threading.Lock() if not getattr(backend, "concurrent_safe", False) else None

    def run(item):
        context, claim, sample_id = item
        try:
            if lock is None:
                return score_pair(context, claim, backend, spec, sample_id=sample_id)
            with lock:
                return score_pair(context, claim, backend, spec, sample_id=sample_id)
        except FactalignError as exc:
            return RecordError(sample_id=sample_id, kind=type(exc).__name__, message=str(exc))

    if parallelism == 1 or len(items) <= 1:
        return [run(item) for item in items]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(run, items))
