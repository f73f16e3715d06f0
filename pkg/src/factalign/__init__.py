"""factalign: factual consistency scoring, data cleaning, synthetic robustness
data generation, and a multi-benchmark evaluation harness."""

__version__ = "0.1.0"
PROTOCOL_VERSION = "v1"

from .core import BenchmarkRecord, ConsistencyScore, Label3, UnifiedSample, unify_label
from .engine import AlignmentMatrix, ScoreBreakdown, aggregate, score_batch, score_pair
from .segment import TokenizerSpec, chunk_context, split_sentences, tokenize

__all__ = [
    "__version__",
    "PROTOCOL_VERSION",
    "Label3",
    "UnifiedSample",
    "BenchmarkRecord",
    "ConsistencyScore",
    "unify_label",
    "AlignmentMatrix",
    "ScoreBreakdown",
    "aggregate",
    "score_pair",
    "score_batch",
    "TokenizerSpec",
    "tokenize",
    "split_sentences",
    "chunk_context",
]
