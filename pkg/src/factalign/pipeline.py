"""Training-data cleaning pipeline.

Per enabled dataset, in order: label unification -> QA claim construction
plus fake-answer similarity filtering (QA datasets only) -> context length
filter -> per-dataset cap. Emits cleaned UnifiedSample JSONL, per-dataset
filter stats, and a training manifest with the standard hyperparameters.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

from .core import Label3, UnifiedSample, unify_label
from .errors import ConfigError, DataError
from .registry import DatasetRegistry
from .segment import TokenizerSpec, tokenize

logger = logging.getLogger(__name__)

DEFAULT_MAX_CONTEXT_TOKENS = 512
DEFAULT_SIMILARITY_THRESHOLD = 0.85

TRAINING_MANIFEST_DEFAULTS = {
    "samples_per_dataset": 20000,
    "max_context_length": 512,
    "lr": 1e-5,
    "seed": 2027,
    "train_batch": 8,
    "accumulate_grad_batch": 1,
    "epoch": 3,
    "warmup_ratio": 0.06,
    "weight_decay": 0.01,
    "adam_epsilon": 1e-6,
}

_ARTICLES = {"a", "an", "the"}


@dataclass(frozen=True)
class QaSample:
    """QA source row: the passage is the context, claims are built from answers."""

    passage: str
    question: str
    true_answer: str
    fake_answers: list[str]

    def __post_init__(self):
        if not self.true_answer.strip():
            raise DataError("QA sample has an empty true answer")


@dataclass
class FilterStats:
    """Per-dataset counters; input = kept + the three drop counters, exactly.

    `malformed` counts source rows that never became candidates and sits
    outside the conservation identity.
    """

    input: int = 0
    kept: int = 0
    dropped_by_length: int = 0
    dropped_by_similarity: int = 0
    dropped_by_cap: int = 0
    malformed: int = 0

    def check(self) -> None:
        total = self.kept + self.dropped_by_length + self.dropped_by_similarity + self.dropped_by_cap
        if total != self.input:
            raise DataError(f"filter stats do not balance: input={self.input}, accounted={total}")

    def merged(self, other: "FilterStats") -> "FilterStats":
        return FilterStats(
            input=self.input + other.input,
            kept=self.kept + other.kept,
            dropped_by_length=self.dropped_by_length + other.dropped_by_length,
            dropped_by_similarity=self.dropped_by_similarity + other.dropped_by_similarity,
            dropped_by_cap=self.dropped_by_cap + other.dropped_by_cap,
            malformed=self.malformed + other.malformed,
        )

    def as_dict(self) -> dict:
        return {
            "input": self.input,
            "kept": self.kept,
            "dropped_by_length": self.dropped_by_length,
            "dropped_by_similarity": self.dropped_by_similarity,
            "dropped_by_cap": self.dropped_by_cap,
            "malformed": self.malformed,
        }


class CharNgramEmbedder:
    """Deterministic character-3-gram term-frequency embedding.

    Needs no model download; a remote sentence-embedding backend can be
    swapped in through the same embed() interface.
    """

    def __init__(self, n: int = 3):
        self.n = n

    def embed(self, text: str) -> dict[str, int]:
        t = " ".join(text.casefold().split())
        if not t:
            return {}
        if len(t) < self.n:
            return {t: 1}
        vec: dict[str, int] = {}
        for i in range(len(t) - self.n + 1):
            g = t[i : i + self.n]
            vec[g] = vec.get(g, 0) + 1
        return vec


def cosine_similarity(a: dict[str, int], b: dict[str, int]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(v * b.get(k, 0) for k, v in a.items())
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    return dot / (na * nb)


def normalize_answer(text: str) -> str:
    """Casefold, strip punctuation and articles, collapse whitespace."""
    clean = []
    for ch in text.casefold():
        if ch.isalnum() or ch.isspace():
            clean.append(ch)
        else:
            clean.append(" ")
    words = [w for w in "".join(clean).split() if w not in _ARTICLES]
    return " ".join(words)


@dataclass(frozen=True)
class FakeAnswerDecision:
    text: str
    kept: bool
    reason: str | None  # "equal" | "containment" | "similarity" | None when kept
    similarity: float | None


def fake_answer_decisions(
    true_answer: str,
    fake_answers: list[str],
    embedder=None,
    threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
) -> list[FakeAnswerDecision]:
    """Apply the drop rules in order: normalized equality, containment,
    embedding cosine >= threshold. Survivors keep input order."""
    embedder = embedder or CharNgramEmbedder()
    truth_norm = normalize_answer(true_answer)
    truth_vec = None
    out = []
    for fake in fake_answers:
        fake_norm = normalize_answer(fake)
        if fake_norm == truth_norm:
            out.append(FakeAnswerDecision(fake, False, "equal", None))
            continue
        if fake_norm in truth_norm or truth_norm in fake_norm:
            out.append(FakeAnswerDecision(fake, False, "containment", None))
            continue
        if truth_vec is None:
            truth_vec = embedder.embed(true_answer)
        sim = cosine_similarity(embedder.embed(fake), truth_vec)
        if sim >= threshold:
            out.append(FakeAnswerDecision(fake, False, "similarity", sim))
        else:
            out.append(FakeAnswerDecision(fake, True, None, sim))
    return out


def filter_fake_answers(
    true_answer: str,
    fake_answers: list[str],
    embedder=None,
    threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
) -> list[str]:
    """Fake answers that survive the similarity filter, in input order."""
    return [d.text for d in fake_answer_decisions(true_answer, fake_answers, embedder, threshold) if d.kept]


def qa_to_claim(sample: QaSample, answer: str) -> str:
    """Concatenate question and answer (single space) as the claim text."""
    if not sample.question.strip():
        raise DataError("QA sample has an empty question")
    if not answer.strip():
        raise DataError("QA answer is empty")
    return f"{sample.question} {answer}"


def filter_by_length(
    sample: UnifiedSample,
    max_tokens: int = DEFAULT_MAX_CONTEXT_TOKENS,
    spec: TokenizerSpec | None = None,
) -> bool:
    """Keep iff the context has strictly fewer than max_tokens tokens."""
    return len(tokenize(sample.context, spec)) < max_tokens


def cap_dataset(stream, cap: int):
    """Yield the first `cap` samples in source order."""
    if cap <= 0:
        raise ConfigError(f"cap must be positive, got {cap}")
    for i, sample in enumerate(stream):
        if i >= cap:
            return
        yield sample


@dataclass
class PipelineResult:
    out_dir: Path
    stats: dict[str, FilterStats]
    totals: FilterStats
    dataset_files: dict[str, Path] = field(default_factory=dict)
    stats_path: Path | None = None
    manifest_path: Path | None = None


def _expand_row(entry, obj, embedder, threshold, registry) -> tuple[list[UnifiedSample], int]:
    """Expand one parsed source row into validated candidate samples.

    Returns (samples, n_dropped_by_similarity). Rows already in unified form
    pass straight through (re-cleaning cleaned output is a no-op); QA rows
    expand into a true-answer claim plus one claim per surviving fake answer.
    Raises DataError if any part of the row is malformed.
    """
    if "context" in obj and "claim" in obj and "label" in obj:
        sample = UnifiedSample(
            context=obj["context"],
            claim=obj["claim"],
            label=unify_label(entry.dataset_id, obj["label"], registry),
            dataset_id=entry.dataset_id,
            sample_id=str(obj["id"]),
        )
        return [sample], 0
    if entry.is_qa and "passage" in obj and "question" in obj and "true_answer" in obj:
        qa = QaSample(
            passage=obj["passage"],
            question=obj["question"],
            true_answer=obj["true_answer"],
            fake_answers=list(obj.get("fake_answers", [])),
        )
        base_id = str(obj["id"])
        decisions = fake_answer_decisions(qa.true_answer, qa.fake_answers, embedder, threshold)
        samples = [
            UnifiedSample(
                context=qa.passage,
                claim=qa_to_claim(qa, qa.true_answer),
                label=Label3.ALIGNED,
                dataset_id=entry.dataset_id,
                sample_id=f"{base_id}::t",
            )
        ]
        dropped = 0
        for fake_index, decision in enumerate(decisions):
            if not decision.kept:
                dropped += 1
                continue
            samples.append(
                UnifiedSample(
                    context=qa.passage,
                    claim=qa_to_claim(qa, decision.text),
                    label=Label3.CONTRADICTION,
                    dataset_id=entry.dataset_id,
                    sample_id=f"{base_id}::f{fake_index}",
                )
            )
        return samples, dropped
    raise DataError("row is neither a (context, claim, label) record nor a QA record")


def run_pipeline(
    registry: DatasetRegistry,
    src_dir: str | Path,
    out_dir: str | Path,
    *,
    cap: int | None = None,
    max_context_tokens: int = DEFAULT_MAX_CONTEXT_TOKENS,
    sim_threshold: float = DEFAULT_SIMILARITY_THRESHOLD,
    spec: TokenizerSpec | None = None,
    embedder=None,
    config_hash: str = "",
) -> PipelineResult:
    """Clean every enabled dataset under src_dir into out_dir.

    Deterministic: datasets run in registry order, rows in file order, and
    two runs over the same inputs produce byte-identical JSONL.
    """
    if cap is not None and cap <= 0:
        raise ConfigError(f"cap must be positive, got {cap}")
    src_dir = Path(src_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = spec or TokenizerSpec()
    embedder = embedder or CharNgramEmbedder()

    stats: dict[str, FilterStats] = {}
    dataset_files: dict[str, Path] = {}
    for entry in registry.enabled_entries():
        source = src_dir / entry.source_name()
        if not source.exists():
            raise DataError(f"dataset {entry.dataset_id!r}: source file missing: {source}")
        ds_stats = FilterStats()
        effective_cap = cap if cap is not None else entry.cap
        out_path = out_dir / f"{entry.dataset_id}.jsonl"
        seen_ids: set[str] = set()
        # token-length cache: QA rows expand to several candidates sharing a context
        with source.open(encoding="utf-8") as src, out_path.open("w", encoding="utf-8") as dst:
            for line_no, line in enumerate(src, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    if not isinstance(obj, dict) or "id" not in obj:
                        raise DataError("row must be an object with an 'id' field")
                    samples, dropped_sim = _expand_row(entry, obj, embedder, sim_threshold, registry)
                except (DataError, json.JSONDecodeError) as exc:
                    ds_stats.malformed += 1
                    logger.warning("%s:%d: skipping malformed row: %s", source.name, line_no, exc)
                    continue
                ds_stats.input += len(samples) + dropped_sim
                ds_stats.dropped_by_similarity += dropped_sim
                context_len: int | None = None
                for sample in samples:
                    if sample.sample_id in seen_ids:
                        # retroactively excluded from input, logged as malformed
                        ds_stats.input -= 1
                        ds_stats.malformed += 1
                        logger.warning(
                            "%s:%d: duplicate sample id %r", source.name, line_no, sample.sample_id
                        )
                        continue
                    seen_ids.add(sample.sample_id)
                    if context_len is None:
                        context_len = len(tokenize(sample.context, spec))
                    if context_len >= max_context_tokens:
                        ds_stats.dropped_by_length += 1
                        continue
                    if ds_stats.kept >= effective_cap:
                        ds_stats.dropped_by_cap += 1
                        continue
                    dst.write(sample.to_json_line() + "\n")
                    ds_stats.kept += 1
        ds_stats.check()
        stats[entry.dataset_id] = ds_stats
        dataset_files[entry.dataset_id] = out_path

    totals = FilterStats()
    for ds_stats in stats.values():
        totals = totals.merged(ds_stats)

    stats_path = out_dir / "stats.json"
    stats_payload = {
        "config_hash": config_hash,
        "datasets": {name: s.as_dict() for name, s in sorted(stats.items())},
        "totals": totals.as_dict(),
    }
    stats_path.write_text(json.dumps(stats_payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    manifest_path = out_dir / "training_manifest.json"
    write_training_manifest(
        manifest_path,
        samples_per_dataset=cap if cap is not None else TRAINING_MANIFEST_DEFAULTS["samples_per_dataset"],
        max_context_length=max_context_tokens,
    )
    return PipelineResult(
        out_dir=out_dir,
        stats=stats,
        totals=totals,
        dataset_files=dataset_files,
        stats_path=stats_path,
        manifest_path=manifest_path,
    )


def write_training_manifest(
    path: str | Path,
    samples_per_dataset: int = TRAINING_MANIFEST_DEFAULTS["samples_per_dataset"],
    max_context_length: int = TRAINING_MANIFEST_DEFAULTS["max_context_length"],
) -> Path:
    """Emit the training manifest; defaults reproduce the standard recipe."""
    manifest = dict(TRAINING_MANIFEST_DEFAULTS)
    manifest["samples_per_dataset"] = samples_per_dataset
    manifest["max_context_length"] = max_context_length
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path
