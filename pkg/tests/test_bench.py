"""Benchmark manifests, fixture corpora, and report assembly."""

import json

import pytest

from factalign.backends import FixtureBackend, LexicalBackend
from factalign.bench import (
    BENCHMARKS,
    BenchmarkManifest,
    generate_fixture_corpus,
    load_benchmark_dataset,
    run_benchmark,
    scaled_counts,
)
from factalign.engine import AlignmentMatrix
from factalign.errors import ConfigError, DataError
from factalign.segment import TokenizerSpec, segment_pair

import numpy as np


class TestManifests:
    def test_all_four_ship(self):
        for name in BENCHMARKS:
            manifest = BenchmarkManifest.load(name)
            assert manifest.benchmark_id == name
            assert manifest.datasets

    def test_published_totals(self):
        expected = {
            "summac": (4578, 2182),
            "summedits": (6348, 2387),
            "true": (105121, 47680),
            "llmr": (25340, 12036),
        }
        for name, (total, consistent) in expected.items():
            manifest = BenchmarkManifest.load(name)
            assert sum(d.expected_total for d in manifest.datasets) == total
            assert sum(d.expected_consistent for d in manifest.datasets) == consistent

    def test_exclusion_list_for_out_of_domain_average(self):
        manifest = BenchmarkManifest.load("true")
        assert set(manifest.avg_star_exclude) == {"paws", "fvr", "vitc"}
        assert BenchmarkManifest.load("summac").avg_star_exclude == ()

    def test_summac_has_five_datasets_no_polytope(self):
        manifest = BenchmarkManifest.load("summac")
        ids = [d.dataset_id for d in manifest.datasets]
        assert ids == ["cg", "xf", "fc", "se", "frk"]
        assert "polytope" not in ids

    def test_specific_counts(self):
        summac = {d.dataset_id: d for d in BenchmarkManifest.load("summac").datasets}
        assert summac["cg"].expected_total == 400
        assert summac["cg"].expected_consistent == 312

    def test_unknown_benchmark(self):
        with pytest.raises(ConfigError):
            BenchmarkManifest.load("nope")

    def test_consistent_cannot_exceed_total(self):
        with pytest.raises(ConfigError):
            BenchmarkManifest.from_dict(
                {
                    "benchmark_id": "x",
                    "datasets": [
                        {"dataset_id": "d", "expected_total": 5, "expected_consistent": 6}
                    ],
                }
            )


class TestScaledCounts:
    def test_identity_at_full_scale(self):
        assert scaled_counts(4578, 2182, 1.0) == (4578, 2182)

    def test_proportional(self):
        assert scaled_counts(1000, 400, 0.1) == (100, 40)

    def test_both_classes_always_present(self):
        total, consistent = scaled_counts(235, 113, 0.01)
        assert total >= 2 and 1 <= consistent < total

    def test_bad_scale(self):
        with pytest.raises(ConfigError):
            scaled_counts(10, 5, 0.0)
        with pytest.raises(ConfigError):
            scaled_counts(10, 5, 1.5)


class TestFixtureCorpus:
    def test_counts_match_manifest(self, tmp_path):
        manifest = BenchmarkManifest.load("summac")
        paths = generate_fixture_corpus(manifest, tmp_path, scale=0.01, seed=0)
        for dataset in manifest.datasets:
            records = load_benchmark_dataset(paths[dataset.dataset_id], dataset.dataset_id)
            total, consistent = scaled_counts(
                dataset.expected_total, dataset.expected_consistent, 0.01
            )
            assert len(records) == total
            assert sum(r.consistent for r in records) == consistent

    def test_deterministic_for_seed(self, tmp_path):
        manifest = BenchmarkManifest.load("summac")
        generate_fixture_corpus(manifest, tmp_path / "a", scale=0.01, seed=9)
        generate_fixture_corpus(manifest, tmp_path / "b", scale=0.01, seed=9)
        for name in ("cg", "xf", "fc", "se", "frk"):
            assert (tmp_path / "a" / f"{name}.jsonl").read_bytes() == (
                tmp_path / "b" / f"{name}.jsonl"
            ).read_bytes()

    def test_missing_file_is_data_error(self, tmp_path):
        with pytest.raises(DataError):
            load_benchmark_dataset(tmp_path / "void.jsonl", "void")


def tiny_manifest():
    return BenchmarkManifest.from_dict(
        {
            "benchmark_id": "tiny",
            "datasets": [
                {"dataset_id": "d1", "expected_total": 4, "expected_consistent": 2},
                {"dataset_id": "d2", "expected_total": 4, "expected_consistent": 2},
            ],
            "avg_star_exclude": ["d2"],
        }
    )


def write_tiny_corpus(tmp_path, scores):
    """Two datasets with controlled records; returns fixture backend scoring them."""
    matrices = {}
    for ds in ("d1", "d2"):
        with (tmp_path / f"{ds}.jsonl").open("w") as fh:
            for i in range(4):
                consistent = i < 2
                record = {
                    "dataset": ds,
                    "id": f"{ds}-{i}",
                    "context": "Shared fixture context sentence.",
                    "claim": "Shared fixture claim sentence.",
                    "consistent": consistent,
                }
                fh.write(json.dumps(record) + "\n")
                aligned = scores[ds][i]
                matrices[f"{ds}:{ds}-{i}"] = AlignmentMatrix.from_array(
                    np.asarray([[[aligned, 1 - aligned, 0.0]]])
                )
    return FixtureBackend(matrices)


class TestRunBenchmark:
    def test_average_is_unweighted_mean(self, tmp_path):
        # d1 perfectly separated (AUC 1.0), d2 fully tied (AUC 0.5)
        backend = write_tiny_corpus(
            tmp_path, {"d1": [0.9, 0.8, 0.2, 0.1], "d2": [0.5, 0.5, 0.5, 0.5]}
        )
        report = run_benchmark(tiny_manifest(), tmp_path, backend, avg_star=True)
        assert report.datasets["d1"].auc_roc == 1.0
        assert report.datasets["d2"].auc_roc == 0.5
        assert report.average_auc == 0.75
        assert report.average_auc_star == 1.0  # d2 excluded
        assert not report.warnings

    def test_count_mismatch_warns(self, tmp_path):
        backend = write_tiny_corpus(
            tmp_path, {"d1": [0.9, 0.8, 0.2, 0.1], "d2": [0.5, 0.5, 0.5, 0.5]}
        )
        manifest = BenchmarkManifest.from_dict(
            {
                "benchmark_id": "tiny",
                "datasets": [{"dataset_id": "d1", "expected_total": 9, "expected_consistent": 3}],
            }
        )
        report = run_benchmark(manifest, tmp_path, backend)
        assert report.warnings and "expects 9/3" in report.warnings[0]

    def test_count_mismatch_strict_raises(self, tmp_path):
        backend = write_tiny_corpus(
            tmp_path, {"d1": [0.9, 0.8, 0.2, 0.1], "d2": [0.5, 0.5, 0.5, 0.5]}
        )
        manifest = BenchmarkManifest.from_dict(
            {
                "benchmark_id": "tiny",
                "datasets": [{"dataset_id": "d1", "expected_total": 9, "expected_consistent": 3}],
            }
        )
        with pytest.raises(DataError):
            run_benchmark(manifest, tmp_path, backend, strict=True)

    def test_balanced_accuracy_reported(self, tmp_path):
        backend = write_tiny_corpus(
            tmp_path, {"d1": [0.9, 0.8, 0.2, 0.1], "d2": [0.9, 0.8, 0.2, 0.1]}
        )
        report = run_benchmark(tiny_manifest(), tmp_path, backend, with_balanced_accuracy=True)
        for result in report.datasets.values():
            assert result.ba_threshold is not None
            assert result.balanced_accuracy is not None

    def test_report_json_deterministic(self, tmp_path):
        backend = write_tiny_corpus(
            tmp_path, {"d1": [0.9, 0.8, 0.2, 0.1], "d2": [0.5, 0.5, 0.5, 0.5]}
        )
        r1 = run_benchmark(tiny_manifest(), tmp_path, backend, avg_star=True, config_hash="c")
        r2 = run_benchmark(tiny_manifest(), tmp_path, backend, avg_star=True, config_hash="c")
        assert r1.to_json() == r2.to_json()
        assert r1.render_table() == r2.render_table()

    def test_avg_recomputable_from_report(self, tmp_path):
        import math

        manifest = BenchmarkManifest.load("summac")
        generate_fixture_corpus(manifest, tmp_path, scale=0.01, seed=3)
        report = run_benchmark(manifest, tmp_path, LexicalBackend(), scale=0.01)
        payload = json.loads(report.to_json())
        aucs = [d["auc_roc"] for d in payload["datasets"].values() if d["auc_roc"] is not None]
        assert payload["average_auc"] == math.fsum(aucs) / len(aucs)

    def test_lexical_backend_beats_chance_on_fixture_corpora(self, tmp_path):
        manifest = BenchmarkManifest.load("summac")
        generate_fixture_corpus(manifest, tmp_path, scale=0.02, seed=5)
        report = run_benchmark(manifest, tmp_path, LexicalBackend(), scale=0.02)
        assert report.average_auc is not None and report.average_auc > 0.6
