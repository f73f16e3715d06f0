"""Command-line entry point: score, clean, synth, bench, make-fixtures,
selfcheck.

Exit codes: 0 ok, 2 configuration error, 3 backend error, 4 data error.
Environment overrides: FACTALIGN_ENDPOINT (remote scorer), FACTALIGN_DATA_DIR
(default data directory).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

from . import PROTOCOL_VERSION, __version__
from .backends import make_backend
from .bench import BenchmarkManifest, BENCHMARKS, generate_fixture_corpus, run_benchmark
from .engine import RecordError, score_batch, score_pair
from .errors import BackendError, ConfigError, DataError, FactalignError
from .pipeline import run_pipeline
from .registry import DatasetRegistry
from .segment import TokenizerSpec
from .synth import (
    HttpLlmClient,
    LlmPerturber,
    StubPerturber,
    generate_robustness_dataset,
    read_unified_jsonl,
    write_synth_result,
)

logger = logging.getLogger("factalign")


def config_hash(config: dict) -> str:
    """Short stable hash of the semantic run configuration.

    Execution knobs (parallelism, timeouts) stay out of the hash so that
    runs differing only in them produce identical outputs.
    """
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def _tokenizer_spec(args) -> TokenizerSpec:
    return TokenizerSpec(
        chunk_budget=args.chunk_budget,
        abbrev_path=args.abbrev,
    )


def _backend_from_args(args, spec: TokenizerSpec):
    endpoint = getattr(args, "endpoint", None) or os.environ.get("FACTALIGN_ENDPOINT")
    return make_backend(
        args.backend,
        spec=spec,
        fixture_path=getattr(args, "fixture", None),
        endpoint=endpoint,
        timeout=getattr(args, "timeout", 30.0),
        retries=getattr(args, "retries", 3),
    )


def _semantic_config(args, spec: TokenizerSpec, extra: dict | None = None) -> dict:
    config = {
        "backend": getattr(args, "backend", None),
        "endpoint": getattr(args, "endpoint", None) or os.environ.get("FACTALIGN_ENDPOINT"),
        "fixture": getattr(args, "fixture", None),
        "chunk_budget": spec.chunk_budget,
        "abbrev": spec.abbrev_path,
        "seed": getattr(args, "seed", 0),
    }
    if extra:
        config.update(extra)
    return config


def cmd_score(args) -> int:
    spec = _tokenizer_spec(args)
    backend = _backend_from_args(args, spec)
    cfg = _semantic_config(args, spec)
    digest = config_hash(cfg)
    logger.info("resolved config %s hash=%s", json.dumps(cfg, sort_keys=True), digest)

    if args.pair:
        ctx_path, claim_path = args.pair
        context = Path(ctx_path).read_text(encoding="utf-8")
        claim = Path(claim_path).read_text(encoding="utf-8")
        breakdown = score_pair(context, claim, backend, spec)
        print(
            json.dumps(
                {
                    "score": breakdown.overall.value,
                    "per_sentence_max": breakdown.per_sentence_max,
                    "best_chunk_index": breakdown.best_chunk_index,
                    "config_hash": digest,
                },
                sort_keys=True,
            )
        )
        return 0

    records = []
    ids = []
    with Path(args.infile).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                context = obj["context"]
                claim = obj["claim"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"{args.infile}:{line_no}: bad record: {exc!r}") from exc
            sample_id = str(obj.get("id", line_no))
            ids.append(sample_id)
            records.append((context, claim, sample_id))
    outcomes = score_batch(records, backend, spec, parallelism=args.parallelism)

    out_fh = sys.stdout if args.out is None else Path(args.out).open("w", encoding="utf-8")
    try:
        meta = {"meta": {"tool": "factalign", "version": __version__, "config_hash": digest}}
        out_fh.write(json.dumps(meta, sort_keys=True) + "\n")
        for sample_id, outcome in zip(ids, outcomes):
            if isinstance(outcome, RecordError):
                row = {
                    "id": sample_id,
                    "error": {"kind": outcome.kind, "message": outcome.message},
                }
            else:
                row = {
                    "id": sample_id,
                    "score": outcome.overall.value,
                    "per_sentence_max": outcome.per_sentence_max,
                    "best_chunk_index": outcome.best_chunk_index,
                }
            out_fh.write(json.dumps(row, sort_keys=True) + "\n")
    finally:
        if out_fh is not sys.stdout:
            out_fh.close()
    return 0


def cmd_clean(args) -> int:
    registry = (
        DatasetRegistry.from_path(args.registry) if args.registry else DatasetRegistry.default()
    )
    src = args.src or os.environ.get("FACTALIGN_DATA_DIR")
    if src is None and args.registry:
        src = str(Path(args.registry).parent)
    if src is None:
        raise ConfigError("no source directory: pass --src or set FACTALIGN_DATA_DIR")
    spec = _tokenizer_spec(args)
    cfg = _semantic_config(
        args,
        spec,
        {
            "registry": args.registry,
            "cap": args.cap,
            "max_context_tokens": args.max_context_tokens,
            "sim_threshold": args.sim_threshold,
        },
    )
    digest = config_hash(cfg)
    logger.info("resolved config %s hash=%s", json.dumps(cfg, sort_keys=True), digest)
    result = run_pipeline(
        registry,
        src,
        args.out,
        cap=args.cap,
        max_context_tokens=args.max_context_tokens,
        sim_threshold=args.sim_threshold,
        spec=spec,
        config_hash=digest,
    )
    totals = result.totals
    print(
        f"cleaned {len(result.stats)} datasets: kept {totals.kept} of {totals.input} "
        f"(length {totals.dropped_by_length}, similarity {totals.dropped_by_similarity}, "
        f"cap {totals.dropped_by_cap}, malformed rows {totals.malformed})"
    )
    print(f"stats: {result.stats_path}")
    print(f"manifest: {result.manifest_path}")
    return 0


def cmd_synth(args) -> int:
    if args.backend == "stub":
        perturber = StubPerturber()
    else:
        endpoint = args.llm_endpoint or os.environ.get("FACTALIGN_LLM_ENDPOINT")
        perturber = LlmPerturber(HttpLlmClient(endpoint))
    spec = _tokenizer_spec(args)
    cfg = _semantic_config(
        args,
        spec,
        {
            "mode": args.mode,
            "synth_backend": args.backend,
            "source": args.source,
            "test_fraction": args.test_fraction,
        },
    )
    digest = config_hash(cfg)
    logger.info("resolved config %s hash=%s", json.dumps(cfg, sort_keys=True), digest)
    sources = read_unified_jsonl(args.source)
    result = generate_robustness_dataset(
        sources,
        args.mode,
        perturber=perturber,
        seed=args.seed,
        test_fraction=args.test_fraction,
    )
    paths = write_synth_result(result, args.out, config_hash=digest)
    print(
        f"{result.dataset_id}: {len(result.train)} train / {len(result.test)} test "
        f"({result.stats.emitted_negative} negatives, {result.stats.emitted_positive} positives, "
        f"{result.stats.emitted_original} originals)"
    )
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def cmd_bench(args) -> int:
    manifest = BenchmarkManifest.load(args.benchmark)
    spec = _tokenizer_spec(args)
    backend = _backend_from_args(args, spec)
    data_dir = args.data or os.environ.get("FACTALIGN_DATA_DIR")
    if data_dir is None:
        raise ConfigError("no data directory: pass --data or set FACTALIGN_DATA_DIR")
    cfg = _semantic_config(
        args,
        spec,
        {
            "benchmark": args.benchmark,
            "scale": args.scale,
            "avg_star": args.avg_star,
            "balanced_accuracy": args.balanced_accuracy,
        },
    )
    digest = config_hash(cfg)
    logger.info("resolved config %s hash=%s", json.dumps(cfg, sort_keys=True), digest)
    report = run_benchmark(
        manifest,
        data_dir,
        backend,
        spec=spec,
        scale=args.scale,
        avg_star=args.avg_star,
        with_balanced_accuracy=args.balanced_accuracy,
        ba_seed=args.seed,
        parallelism=args.parallelism,
        strict=args.strict,
        config_hash=digest,
    )
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        json_path = out_dir / f"{args.benchmark}_report.json"
        txt_path = out_dir / f"{args.benchmark}_report.txt"
        json_path.write_text(report.to_json(), encoding="utf-8")
        txt_path.write_text(report.render_table(), encoding="utf-8")
        print(f"report: {json_path}")
        print(f"table: {txt_path}")
    sys.stdout.write(report.render_table())
    return 0


def cmd_make_fixtures(args) -> int:
    names = BENCHMARKS if args.benchmark == "all" else (args.benchmark,)
    for name in names:
        manifest = BenchmarkManifest.load(name)
        out_dir = Path(args.out) / name
        paths = generate_fixture_corpus(manifest, out_dir, scale=args.scale, seed=args.seed)
        print(f"{name}: {len(paths)} datasets under {out_dir} (scale {args.scale})")
    return 0


def cmd_selfcheck(args) -> int:
    from .backends.remote import RemoteBackend

    endpoint = args.endpoint or os.environ.get("FACTALIGN_ENDPOINT")
    if not endpoint:
        raise ConfigError("selfcheck requires --endpoint or FACTALIGN_ENDPOINT")
    backend = RemoteBackend(endpoint, timeout=args.timeout, retries=args.retries)
    chunks = ["The river Thames flows through London.", "It is 346 km long."]
    sentences = ["The Thames runs through London.", "The river is 346 km long."]
    matrix = backend.align(chunks, sentences)
    print(
        json.dumps(
            {
                "endpoint": backend.url,
                "protocol": PROTOCOL_VERSION,
                "shape": list(matrix.probs.shape),
                "row_sums_ok": True,
                "served_by": backend._served_by,
            },
            sort_keys=True,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factalign",
        description="Factual consistency scoring, data cleaning, synthetic robustness data, and benchmarks.",
    )
    parser.add_argument(
        "--version", action="version", version=f"factalign {__version__} (protocol {PROTOCOL_VERSION})"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log at INFO level")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, backend=True):
        p.add_argument("--chunk-budget", type=int, default=350)
        p.add_argument("--abbrev", help="path to an abbreviation guard list")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--parallelism", type=int, default=1)
        if backend:
            p.add_argument("--backend", choices=["lexical", "fixture", "remote"], default="lexical")
            p.add_argument("--fixture", help="recorded matrices for the fixture backend")
            p.add_argument("--endpoint", help="remote scorer base URL")
            p.add_argument("--timeout", type=float, default=30.0)
            p.add_argument("--retries", type=int, default=3)

    p = sub.add_parser("score", help="score a pair or a JSONL stream")
    add_common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pair", nargs=2, metavar=("CTX_FILE", "CLAIM_FILE"))
    group.add_argument("--in", dest="infile", metavar="FILE")
    p.add_argument("--out", help="output path for scored JSONL (default stdout)")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("clean", help="run the training-data cleaning pipeline")
    add_common(p, backend=False)
    p.add_argument("--registry", help="dataset registry JSON (default: packaged registry)")
    p.add_argument("--src", help="directory of source dataset JSONL files")
    p.add_argument("--out", required=True)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--max-context-tokens", type=int, default=512)
    p.add_argument("--sim-threshold", type=float, default=0.85)
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("synth", help="generate robustness data by entity perturbation")
    add_common(p, backend=False)
    p.add_argument("--source", required=True, help="UnifiedSample JSONL of entailed claims")
    p.add_argument("--mode", choices=["name", "num"], required=True)
    p.add_argument("--backend", choices=["stub", "llm"], default="stub")
    p.add_argument("--llm-endpoint")
    p.add_argument("--out", required=True)
    p.add_argument("--test-fraction", type=float, default=0.15)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="run a benchmark and emit a report")
    add_common(p)
    p.add_argument("--benchmark", choices=list(BENCHMARKS), required=True)
    p.add_argument("--data", help="directory of benchmark dataset JSONL files")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--avg-star", action="store_true")
    p.add_argument("--balanced-accuracy", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", help="directory for report artifacts")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("make-fixtures", help="generate synthetic stand-in benchmark corpora")
    p.add_argument("--benchmark", choices=list(BENCHMARKS) + ["all"], default="all")
    p.add_argument("--out", required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_make_fixtures)

    p = sub.add_parser("selfcheck", help="validate a remote scorer against the wire protocol")
    p.add_argument("--endpoint")
    p.add_argument("--timeout", type=float, default=30.0)
    p.add_argument("--retries", type=int, default=1)
    p.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 4
    except FactalignError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
