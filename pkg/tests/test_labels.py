"""Label unification and domain type round-trips."""

import json

import pytest

from factalign.core import BenchmarkRecord, ConsistencyScore, Label3, UnifiedSample, unify_label
from factalign.errors import DataError, LabelError, UnknownDatasetError
from factalign.registry import DatasetRegistry


def test_regression_bins_match_quoted_boundaries():
    assert unify_label("stsb", 0.45) is Label3.ALIGNED
    assert unify_label("stsb", 0.3) is Label3.NEUTRAL
    assert unify_label("stsb", 0.2999) is Label3.CONTRADICTION
    assert unify_label("stsb", 1.0) is Label3.ALIGNED
    assert unify_label("stsb", 0.0) is Label3.CONTRADICTION
    assert unify_label("stsb", 0.4499999) is Label3.NEUTRAL


def test_binary_negative_mapping_depends_on_dataset():
    assert unify_label("qqp", "not-aligned") is Label3.NEUTRAL
    assert unify_label("doc_nli", "not-aligned") is Label3.CONTRADICTION
    assert unify_label("paws", "not-aligned") is Label3.CONTRADICTION
    assert unify_label("paws", "aligned") is Label3.ALIGNED


def test_label_strings_normalized_before_mapping():
    assert unify_label("doc_nli", "NOT_ALIGNED") is Label3.CONTRADICTION
    assert unify_label("doc_nli", "Not-Entailment") is Label3.CONTRADICTION
    assert unify_label("snli", "Entailment") is Label3.ALIGNED
    assert unify_label("snli", "no-evidence") is Label3.NEUTRAL


def test_canonical_labels_accepted_for_any_scheme():
    # makes re-cleaning cleaned output a no-op
    assert unify_label("stsb", "aligned") is Label3.ALIGNED
    assert unify_label("qqp", "contradiction") is Label3.CONTRADICTION
    assert unify_label("snli", "neutral") is Label3.NEUTRAL


def test_unknown_dataset_is_an_error_never_defaulted():
    with pytest.raises(UnknownDatasetError):
        unify_label("definitely_not_registered", "aligned")


def test_out_of_scheme_labels_rejected_with_field_name():
    with pytest.raises(LabelError) as err:
        unify_label("stsb", 1.5)
    assert err.value.field == "raw_label"
    with pytest.raises(LabelError):
        unify_label("stsb", "very consistent")
    with pytest.raises(LabelError):
        unify_label("snli", 0.7)
    with pytest.raises(LabelError):
        unify_label("doc_nli", "sort of fine")
    with pytest.raises(LabelError):
        unify_label("doc_nli", True)


def test_totality_over_shipped_registry():
    registry = DatasetRegistry.default()
    legal = {
        "three_way": ["entailment", "neutral", "contradiction"],
        "binary_contradiction": ["aligned", "not-aligned"],
        "binary_neutral": ["aligned", "not-aligned"],
        "regression": [0.0, 0.29, 0.3, 0.449, 0.45, 1.0],
    }
    for entry in registry.entries.values():
        for raw in legal[entry.label_scheme]:
            label = unify_label(entry.dataset_id, raw, registry)
            assert isinstance(label, Label3)


def test_unified_sample_round_trip_is_byte_identical():
    sample = UnifiedSample(
        context="A ctx with ünïcode.",
        claim="The claim.",
        label=Label3.NEUTRAL,
        dataset_id="snli",
        sample_id="s-17",
    )
    line = sample.to_json_line()
    again = UnifiedSample.from_json_line(line)
    assert again == sample
    assert again.to_json_line() == line
    obj = json.loads(line)
    assert set(obj) == {"dataset", "id", "context", "claim", "label"}


def test_unified_sample_rejects_empty_texts():
    with pytest.raises(DataError):
        UnifiedSample(context="  ", claim="c", label=Label3.ALIGNED, dataset_id="x", sample_id="1")
    with pytest.raises(DataError):
        UnifiedSample(context="c", claim="\n", label=Label3.ALIGNED, dataset_id="x", sample_id="1")


def test_benchmark_record_wire_format():
    rec = BenchmarkRecord(
        context="ctx", claim="clm", consistent=False, dataset_id="cg", sample_id="cg-1"
    )
    obj = json.loads(rec.to_json_line())
    assert obj == {"dataset": "cg", "id": "cg-1", "context": "ctx", "claim": "clm", "consistent": False}
    assert BenchmarkRecord.from_json_line(rec.to_json_line()) == rec
    with pytest.raises(DataError):
        BenchmarkRecord.from_json_line('{"dataset": "cg", "id": "1", "context": "c", "claim": "c", "consistent": "yes"}')


def test_consistency_score_range():
    ConsistencyScore(0.0)
    ConsistencyScore(1.0)
    with pytest.raises(DataError):
        ConsistencyScore(1.01)
    with pytest.raises(DataError):
        ConsistencyScore(-0.01)
