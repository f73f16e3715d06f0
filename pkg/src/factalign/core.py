"""Domain types shared by every module, plus label unification.

Wire formats (bit-exact field names):
  UnifiedSample JSONL   {"dataset": str, "id": str, "context": str, "claim": str,
                         "label": "aligned"|"neutral"|"contradiction"}
  BenchmarkRecord JSONL {"dataset": str, "id": str, "context": str, "claim": str,
                         "consistent": true|false}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import DataError, LabelError


class Label3(Enum):
    """Three-way alignment label carried by every unified training sample."""

    ALIGNED = "aligned"
    NEUTRAL = "neutral"
    CONTRADICTION = "contradiction"

    def __str__(self) -> str:
        return self.value


# Regression labels are binned left-closed: the boundary values belong
# to the upper class (0.45 -> ALIGNED, 0.3 -> NEUTRAL).
REGRESSION_ALIGNED_MIN = 0.45
REGRESSION_NEUTRAL_MIN = 0.3

_POSITIVE_BINARY = {
    "aligned", "entailment", "entailed", "entail", "yes", "true", "positive",
    "1", "equivalent", "duplicate", "duplicates", "paraphrase", "supports",
    "supported", "consistent",
}
_NEGATIVE_BINARY = {
    "not aligned", "notaligned", "not entailment", "non entailment",
    "not entailed", "no", "false", "negative", "0", "not equivalent",
    "not duplicate", "not paraphrase", "refutes", "refuted", "inconsistent",
}
_THREEWAY_ALIGNED = {"aligned", "entailment", "entailed", "entail", "supports", "supported"}
_THREEWAY_NEUTRAL = {"neutral", "no evidence", "not enough info", "not enough information", "nei"}
_THREEWAY_CONTRA = {"contradiction", "contradict", "contradicts", "refutes", "refuted"}


def canonical_label_text(raw: str) -> str:
    """Normalize a label string: casefold, hyphens/underscores to spaces."""
    text = raw.casefold().replace("-", " ").replace("_", " ")
    return " ".join(text.split())


def unify_label(dataset_id: str, raw_label, registry=None) -> Label3:
    """Map a dataset-native label onto the three-way label space.

    The mapping is total over the registry: binary negatives go to
    CONTRADICTION or NEUTRAL depending on the dataset's declared scheme,
    regression scores are binned, and already-canonical three-way strings
    are accepted for any scheme (this makes re-cleaning cleaned output a
    no-op). Anything else raises LabelError naming the offending field.
    """
    from .registry import DatasetRegistry

    if registry is None:
        registry = DatasetRegistry.default()
    entry = registry.get(dataset_id)
    scheme = entry.label_scheme

    if isinstance(raw_label, str):
        canon = canonical_label_text(raw_label)
        if canon == "aligned":
            return Label3.ALIGNED
        if canon == "neutral":
            return Label3.NEUTRAL
        if canon == "contradiction":
            return Label3.CONTRADICTION
        if scheme == "regression":
            raise LabelError(dataset_id, "raw_label", raw_label,
                             "regression scheme requires a numeric value in [0, 1]")
        if scheme == "three_way":
            if canon in _THREEWAY_ALIGNED:
                return Label3.ALIGNED
            if canon in _THREEWAY_NEUTRAL:
                return Label3.NEUTRAL
            if canon in _THREEWAY_CONTRA:
                return Label3.CONTRADICTION
            raise LabelError(dataset_id, "raw_label", raw_label, "not a recognized three-way label")
        # binary schemes
        if canon in _POSITIVE_BINARY:
            return Label3.ALIGNED
        if canon in _NEGATIVE_BINARY:
            if scheme == "binary_neutral":
                return Label3.NEUTRAL
            return Label3.CONTRADICTION
        raise LabelError(dataset_id, "raw_label", raw_label, "not a recognized binary label")

    if isinstance(raw_label, bool):
        raise LabelError(dataset_id, "raw_label", raw_label, "boolean labels are not part of any scheme")

    if isinstance(raw_label, (int, float)):
        if scheme != "regression":
            raise LabelError(dataset_id, "raw_label", raw_label,
                             f"numeric label given to {scheme} dataset")
        value = float(raw_label)
        if not 0.0 <= value <= 1.0:
            raise LabelError(dataset_id, "raw_label", raw_label, "regression value outside [0, 1]")
        if value >= REGRESSION_ALIGNED_MIN:
            return Label3.ALIGNED
        if value >= REGRESSION_NEUTRAL_MIN:
            return Label3.NEUTRAL
        return Label3.CONTRADICTION

    raise LabelError(dataset_id, "raw_label", raw_label, "unsupported label type")


@dataclass(frozen=True)
class RawSample:
    """A source record before unification: named text fields plus a native label."""

    dataset_id: str
    payload: dict
    raw_label: object


@dataclass(frozen=True)
class UnifiedSample:
    """The atom of training data: a (context, claim) pair with a three-way label."""

    context: str
    claim: str
    label: Label3
    dataset_id: str
    sample_id: str

    def __post_init__(self):
        if not self.context.strip():
            raise DataError(f"sample {self.dataset_id}/{self.sample_id}: empty context")
        if not self.claim.strip():
            raise DataError(f"sample {self.dataset_id}/{self.sample_id}: empty claim")

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "dataset": self.dataset_id,
                "id": self.sample_id,
                "context": self.context,
                "claim": self.claim,
                "label": self.label.value,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json_line(cls, line: str) -> "UnifiedSample":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid JSON: {exc}") from exc
        try:
            return cls(
                context=obj["context"],
                claim=obj["claim"],
                label=Label3(obj["label"]),
                dataset_id=obj["dataset"],
                sample_id=obj["id"],
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise DataError(f"not a unified sample record: {exc!r}") from exc


@dataclass(frozen=True)
class BenchmarkRecord:
    """One benchmark item: a (context, claim) pair with a binary consistency label."""

    context: str
    claim: str
    consistent: bool
    dataset_id: str
    sample_id: str

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "dataset": self.dataset_id,
                "id": self.sample_id,
                "context": self.context,
                "claim": self.claim,
                "consistent": self.consistent,
            },
            ensure_ascii=False,
        )

    @classmethod
    def from_json_line(cls, line: str) -> "BenchmarkRecord":
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid JSON: {exc}") from exc
        try:
            consistent = obj["consistent"]
            if not isinstance(consistent, bool):
                raise DataError("field 'consistent' must be a JSON boolean")
            return cls(
                context=obj["context"],
                claim=obj["claim"],
                consistent=consistent,
                dataset_id=obj["dataset"],
                sample_id=obj["id"],
            )
        except KeyError as exc:
            raise DataError(f"not a benchmark record: missing field {exc}") from exc


@dataclass(frozen=True)
class ConsistencyScore:
    """Scalar factual consistency score in [0, 1]."""

    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DataError(f"consistency score {self.value} outside [0, 1]")
