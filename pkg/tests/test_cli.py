"""Command-line interface: subcommands, exit codes, determinism."""

import json

import pytest

from factalign.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestScore:
    def test_pair_identical_scores_one(self, tmp_path, capsys):
        ctx = tmp_path / "ctx.txt"
        clm = tmp_path / "clm.txt"
        ctx.write_text("The sky is blue.")
        clm.write_text("The sky is blue.")
        code, out, _ = run_cli(capsys, "score", "--pair", str(ctx), str(clm))
        assert code == 0
        payload = json.loads(out)
        assert payload["score"] == 1.0
        assert payload["per_sentence_max"] == [1.0]
        assert payload["config_hash"]

    def test_remote_without_endpoint_is_config_error(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("FACTALIGN_ENDPOINT", raising=False)
        ctx = tmp_path / "c.txt"
        ctx.write_text("x")
        code, _, err = run_cli(capsys, "score", "--backend", "remote", "--pair", str(ctx), str(ctx))
        assert code == 2
        assert "config error" in err

    def test_stream_isolates_bad_records(self, tmp_path, capsys):
        infile = tmp_path / "in.jsonl"
        rows = [
            {"id": "a", "context": "Alpha beta gamma.", "claim": "Alpha beta gamma."},
            {"id": "b", "context": "Some context.", "claim": "   "},
            {"id": "c", "context": "Delta epsilon.", "claim": "Delta epsilon."},
        ]
        infile.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        code, out, _ = run_cli(capsys, "score", "--in", str(infile))
        assert code == 0
        lines = out.strip().splitlines()
        assert "meta" in json.loads(lines[0])
        scored = [json.loads(l) for l in lines[1:]]
        assert scored[0]["score"] == 1.0
        assert scored[1]["error"]["kind"] == "DegenerateInputError"
        assert scored[2]["score"] == 1.0

    def test_parallelism_does_not_change_output(self, tmp_path, capsys):
        infile = tmp_path / "in.jsonl"
        rows = [
            {"id": str(i), "context": f"Context {i} mentions fact {i}.", "claim": f"Fact {i} is mentioned."}
            for i in range(25)
        ]
        infile.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        out1 = tmp_path / "o1.jsonl"
        out8 = tmp_path / "o8.jsonl"
        assert main(["score", "--in", str(infile), "--out", str(out1), "--parallelism", "1"]) == 0
        assert main(["score", "--in", str(infile), "--out", str(out8), "--parallelism", "8"]) == 0
        assert out1.read_bytes() == out8.read_bytes()


class TestClean:
    def test_fixture_registry_run(self, tmp_path, capsys):
        registry = [
            {"dataset_id": "demo", "label_scheme": "binary_contradiction", "cap": 10}
        ]
        reg_path = tmp_path / "registry.json"
        reg_path.write_text(json.dumps(registry))
        with (tmp_path / "demo.jsonl").open("w") as fh:
            for i in range(4):
                fh.write(json.dumps({"id": str(i), "context": "ctx", "claim": "clm", "label": "aligned"}) + "\n")
        out_dir = tmp_path / "out"
        code, out, _ = run_cli(
            capsys, "clean", "--registry", str(reg_path), "--out", str(out_dir)
        )
        assert code == 0
        assert (out_dir / "demo.jsonl").exists()
        assert (out_dir / "stats.json").exists()
        manifest = json.loads((out_dir / "training_manifest.json").read_text())
        assert manifest["epoch"] == 3
        assert manifest["lr"] == 1e-5

    def test_missing_source_dir_is_config_error(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("FACTALIGN_DATA_DIR", raising=False)
        code, _, err = run_cli(capsys, "clean", "--out", str(tmp_path / "o"))
        assert code == 2


class TestSynth:
    def test_stub_backend_offline(self, tmp_path, capsys):
        source = tmp_path / "src.jsonl"
        rows = [
            {
                "dataset": "doc_nli",
                "id": f"d{i}",
                "context": f"Background {i}: Rosa Parks acted in 1955.",
                "claim": f"Activist Rosa Parks acted in {1950 + i}.",
                "label": "aligned",
            }
            for i in range(6)
        ]
        source.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        out_dir = tmp_path / "synth"
        code, out, _ = run_cli(
            capsys, "synth", "--source", str(source), "--mode", "name", "--backend", "stub",
            "--out", str(out_dir),
        )
        assert code == 0
        assert (out_dir / "robust_name.train.jsonl").exists()
        assert (out_dir / "robust_name.audit.jsonl").exists()

    def test_bad_source_is_data_error(self, tmp_path, capsys):
        missing = tmp_path / "none.jsonl"
        code, _, err = run_cli(
            capsys, "synth", "--source", str(missing), "--mode", "num", "--out", str(tmp_path)
        )
        assert code == 4


class TestBench:
    def test_fixture_backend_byte_identical_reports(self, tmp_path, capsys):
        from factalign.backends import FixtureBackend, LexicalBackend
        from factalign.bench import BenchmarkManifest, generate_fixture_corpus, load_benchmark_dataset
        from factalign.segment import TokenizerSpec, segment_pair

        manifest = BenchmarkManifest.load("summac")
        data_dir = tmp_path / "data"
        generate_fixture_corpus(manifest, data_dir, scale=0.005, seed=4)
        # record lexical matrices into a replayable fixture file
        lexical = LexicalBackend()
        spec = TokenizerSpec()
        matrices = {}
        for dataset in manifest.datasets:
            for record in load_benchmark_dataset(data_dir / f"{dataset.dataset_id}.jsonl", dataset.dataset_id):
                seg = segment_pair(record.context, record.claim, spec)
                key = f"{record.dataset_id}:{record.sample_id}"
                matrices[key] = lexical.align(seg.chunks, seg.sentences)
        fixture_path = tmp_path / "matrices.json"
        FixtureBackend.record(fixture_path, matrices)

        args = [
            "bench", "--benchmark", "summac", "--data", str(data_dir), "--backend", "fixture",
            "--fixture", str(fixture_path), "--scale", "0.005",
        ]
        r1 = tmp_path / "r1"
        r2 = tmp_path / "r2"
        assert main(args + ["--out", str(r1)]) == 0
        assert main(args + ["--out", str(r2)]) == 0
        capsys.readouterr()
        assert (r1 / "summac_report.json").read_bytes() == (r2 / "summac_report.json").read_bytes()
        assert (r1 / "summac_report.txt").read_bytes() == (r2 / "summac_report.txt").read_bytes()

    def test_missing_data_dir_is_config_error(self, capsys, monkeypatch):
        monkeypatch.delenv("FACTALIGN_DATA_DIR", raising=False)
        code, _, err = run_cli(capsys, "bench", "--benchmark", "summac")
        assert code == 2

    def test_missing_dataset_file_is_data_error(self, tmp_path, capsys):
        code, _, err = run_cli(
            capsys, "bench", "--benchmark", "summac", "--data", str(tmp_path)
        )
        assert code == 4


class TestMakeFixtures:
    def test_single_benchmark(self, tmp_path, capsys):
        code, out, _ = run_cli(
            capsys, "make-fixtures", "--benchmark", "summac", "--out", str(tmp_path), "--scale", "0.005"
        )
        assert code == 0
        assert (tmp_path / "summac" / "cg.jsonl").exists()


class TestSelfcheck:
    def test_against_stub(self, capsys, sidecar_stub):
        code, out, _ = run_cli(capsys, "selfcheck", "--endpoint", sidecar_stub.url)
        assert code == 0
        payload = json.loads(out)
        assert payload["shape"] == [2, 2, 3]
        assert payload["protocol"] == "v1"

    def test_unreachable_is_backend_error(self, capsys):
        code, _, err = run_cli(
            capsys, "selfcheck", "--endpoint", "http://127.0.0.1:1", "--timeout", "0.2", "--retries", "0"
        )
        assert code == 3
