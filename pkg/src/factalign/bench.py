"""Benchmark harness: manifests, loaders, fixture corpora, and reports.

The four shipped manifests (summac, true, summedits, llmr) carry per-dataset
expected counts; loaders verify counts and record mismatches as warnings.
Real benchmark data is not redistributed: generate_fixture_corpus builds
synthetic stand-in corpora with matching (optionally scaled) counts for CI.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import BenchmarkRecord
from .engine import RecordError, score_batch
from .errors import ConfigError, DataError
from .metrics import SingleClassError, auc_roc, balanced_accuracy, select_threshold_detail
from .segment import TokenizerSpec

BENCHMARKS = ("summac", "true", "summedits", "llmr")


@dataclass(frozen=True)
class ManifestDataset:
    dataset_id: str
    expected_total: int
    expected_consistent: int

    def __post_init__(self):
        if self.expected_consistent > self.expected_total:
            raise ConfigError(
                f"manifest {self.dataset_id!r}: consistent count exceeds total"
            )


@dataclass(frozen=True)
class BenchmarkManifest:
    benchmark_id: str
    datasets: tuple[ManifestDataset, ...]
    avg_star_exclude: tuple[str, ...] = ()

    @classmethod
    def from_dict(cls, raw: dict) -> "BenchmarkManifest":
        datasets = tuple(
            ManifestDataset(d["dataset_id"], d["expected_total"], d["expected_consistent"])
            for d in raw["datasets"]
        )
        return cls(
            benchmark_id=raw["benchmark_id"],
            datasets=datasets,
            avg_star_exclude=tuple(raw.get("avg_star_exclude", [])),
        )

    @classmethod
    def load(cls, benchmark_id: str) -> "BenchmarkManifest":
        if benchmark_id not in BENCHMARKS:
            raise ConfigError(f"unknown benchmark {benchmark_id!r}; expected one of {BENCHMARKS}")
        text = (
            resources.files("factalign.data.manifests")
            .joinpath(f"{benchmark_id}.json")
            .read_text("utf-8")
        )
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_path(cls, path: str | Path) -> "BenchmarkManifest":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def scaled_counts(total: int, consistent: int, scale: float) -> tuple[int, int]:
    """Proportionally scaled (total, consistent), keeping both classes present."""
    if not 0 < scale <= 1:
        raise ConfigError(f"scale must be in (0, 1], got {scale}")
    if scale == 1.0:
        return total, consistent
    st = max(2, int(total * scale + 0.5))
    sc = min(st - 1, max(1, int(consistent * scale + 0.5)))
    return st, sc


# vocabulary for synthetic fixture corpora
_FIXTURE_WORDS = (
    "the quick river flows past old stone bridges while farmers tend wide "
    "green fields and traders carry goods along dusty roads toward distant "
    "markets where people gather to exchange news about harvests weather "
    "ships politics and prices small towns grow slowly their streets lined "
    "with shops houses schools and quiet gardens every season brings change "
    "rain sun wind and frost shape the land as generations pass stories are "
    "told again and again each time a little different from before"
).split()
_FIXTURE_NAMES = (
    "Alice Baker", "Carlos Diaz", "Elena Ford", "George Hale", "Irene Jones",
    "Kamal Nair", "Laura Moss", "Nora Wolfe", "Pablo Ruiz", "Sara Tanaka",
    "Victor Young", "Wendy Zhang", "Omar Khan", "Julia Costa", "Henry Adams",
)


def _fixture_sentence(rng: random.Random) -> str:
    words = [rng.choice(_FIXTURE_WORDS) for _ in range(rng.randint(6, 10))]
    if rng.random() < 0.5:
        words.insert(rng.randint(1, len(words)), rng.choice(_FIXTURE_NAMES))
    if rng.random() < 0.5:
        words.insert(rng.randint(1, len(words)), str(rng.randint(2, 9999)))
    return " ".join(words) + "."


def _corrupt_sentence(sentence: str, rng: random.Random) -> str:
    """Make a claim inconsistent: swap in novel tokens, damage names/numbers."""
    tokens = sentence.rstrip(".").split()
    out = []
    for tok in tokens:
        if tok[:1].isupper() or tok[:1].isdigit():
            out.append(tok[:-1] + "x" if len(tok) > 1 else "zz")
        elif rng.random() < 0.5:
            out.append("un" + tok + "ish")
        else:
            out.append(tok)
    return " ".join(out) + "."


def generate_fixture_corpus(
    manifest: BenchmarkManifest,
    out_dir: str | Path,
    scale: float = 1.0,
    seed: int = 0,
) -> dict[str, Path]:
    """Write synthetic BenchmarkRecord JSONL files matching the manifest counts."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}
    for dataset in manifest.datasets:
        total, consistent = scaled_counts(
            dataset.expected_total, dataset.expected_consistent, scale
        )
        rng = random.Random(f"{seed}:{manifest.benchmark_id}:{dataset.dataset_id}")
        path = out_dir / f"{dataset.dataset_id}.jsonl"
        with path.open("w", encoding="utf-8") as fh:
            for i in range(total):
                sentences = [_fixture_sentence(rng) for _ in range(rng.randint(3, 6))]
                context = " ".join(sentences)
                picked = rng.sample(sentences, k=min(len(sentences), rng.randint(1, 2)))
                is_consistent = i < consistent
                if is_consistent:
                    claim = " ".join(picked)
                else:
                    claim = " ".join(_corrupt_sentence(s, rng) for s in picked)
                record = BenchmarkRecord(
                    context=context,
                    claim=claim,
                    consistent=is_consistent,
                    dataset_id=dataset.dataset_id,
                    sample_id=f"{dataset.dataset_id}-{i:06d}",
                )
                fh.write(record.to_json_line() + "\n")
        paths[dataset.dataset_id] = path
    return paths


def load_benchmark_dataset(path: str | Path, dataset_id: str) -> list[BenchmarkRecord]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"benchmark dataset file missing: {path}")
    records: list[BenchmarkRecord] = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(BenchmarkRecord.from_json_line(line))
            except DataError as exc:
                raise DataError(f"{path}:{line_no}: {exc}") from exc
    return records


@dataclass
class DatasetResult:
    n: int
    n_consistent: int
    auc_roc: float | None
    balanced_accuracy: float | None = None
    ba_threshold: float | None = None
    error: str | None = None
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "n_consistent": self.n_consistent,
            "auc_roc": self.auc_roc,
            "balanced_accuracy": self.balanced_accuracy,
            "ba_threshold": self.ba_threshold,
            "error": self.error,
            "warnings": self.warnings,
        }


@dataclass
class EvalReport:
    benchmark_id: str
    backend: dict
    config_hash: str
    scale: float
    datasets: dict[str, DatasetResult]
    average_auc: float | None
    average_auc_star: float | None = None
    avg_star_exclude: tuple[str, ...] = ()
    warnings: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "benchmark": self.benchmark_id,
            "backend": self.backend,
            "config_hash": self.config_hash,
            "scale": self.scale,
            "datasets": {name: r.as_dict() for name, r in self.datasets.items()},
            "average_auc": self.average_auc,
            "average_auc_star": self.average_auc_star,
            "avg_star_exclude": list(self.avg_star_exclude),
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def render_table(self) -> str:
        def fmt(x):
            return f"{x:.4f}" if x is not None else "-"

        lines = [
            f"benchmark: {self.benchmark_id}   backend: {json.dumps(self.backend, sort_keys=True)}"
            f"   config: {self.config_hash or '-'}",
            f"{'dataset':<10} {'n':>7} {'consistent':>11} {'auc_roc':>9} {'bal_acc':>9}",
        ]
        for name, r in self.datasets.items():
            lines.append(
                f"{name:<10} {r.n:>7} {r.n_consistent:>11} {fmt(r.auc_roc):>9} "
                f"{fmt(r.balanced_accuracy):>9}"
            )
        lines.append(f"{'AVG':<10} {'':>7} {'':>11} {fmt(self.average_auc):>9}")
        if self.average_auc_star is not None:
            excl = ", ".join(self.avg_star_exclude)
            lines.append(
                f"{'AVG*':<10} {'':>7} {'':>11} {fmt(self.average_auc_star):>9}  (excludes: {excl})"
            )
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines) + "\n"


def run_benchmark(
    manifest: BenchmarkManifest,
    data_dir: str | Path,
    backend,
    *,
    spec: TokenizerSpec | None = None,
    scale: float = 1.0,
    avg_star: bool = False,
    with_balanced_accuracy: bool = False,
    ba_seed: int = 0,
    parallelism: int = 1,
    strict: bool = False,
    config_hash: str = "",
) -> EvalReport:
    """Score every dataset of a benchmark and aggregate metrics.

    Dataset AUCs are averaged unweighted. With avg_star, the manifest's
    exclusion list is removed from a second average. Count mismatches against
    the (scaled) manifest expectations become warnings, or errors when strict.
    """
    data_dir = Path(data_dir)
    spec = spec or TokenizerSpec()
    results: dict[str, DatasetResult] = {}
    report_warnings: list[str] = []
    for dataset in manifest.datasets:
        records = load_benchmark_dataset(data_dir / f"{dataset.dataset_id}.jsonl", dataset.dataset_id)
        expected_total, expected_consistent = scaled_counts(
            dataset.expected_total, dataset.expected_consistent, scale
        )
        n = len(records)
        n_consistent = sum(1 for r in records if r.consistent)
        result = DatasetResult(n=n, n_consistent=n_consistent, auc_roc=None)
        if (n, n_consistent) != (expected_total, expected_consistent):
            msg = (
                f"{dataset.dataset_id}: loaded {n}/{n_consistent} "
                f"(total/consistent), manifest expects {expected_total}/{expected_consistent}"
            )
            if strict:
                raise DataError(msg)
            result.warnings.append(msg)
            report_warnings.append(msg)

        batch = [(r.context, r.claim, f"{r.dataset_id}:{r.sample_id}") for r in records]
        outcomes = score_batch(batch, backend, spec, parallelism=parallelism)
        scores: list[float] = []
        labels: list[bool] = []
        for record, outcome in zip(records, outcomes):
            if isinstance(outcome, RecordError):
                msg = f"{dataset.dataset_id}:{record.sample_id}: {outcome.kind}: {outcome.message}"
                if strict:
                    raise DataError(msg)
                result.warnings.append(msg)
                report_warnings.append(msg)
                continue
            scores.append(outcome.overall.value)
            labels.append(record.consistent)
        try:
            result.auc_roc = auc_roc(scores, labels)
        except SingleClassError as exc:
            result.error = f"excluded from averages: {exc}"
        if with_balanced_accuracy and result.error is None:
            threshold, held_ba = select_threshold_detail(scores, labels, ba_seed)
            result.ba_threshold = threshold
            result.balanced_accuracy = (
                held_ba if held_ba is not None else balanced_accuracy(scores, labels, threshold)
            )
        results[dataset.dataset_id] = result

    aucs = [r.auc_roc for r in results.values() if r.auc_roc is not None]
    average = math.fsum(aucs) / len(aucs) if aucs else None
    average_star = None
    if avg_star and manifest.avg_star_exclude:
        star = [
            r.auc_roc
            for name, r in results.items()
            if r.auc_roc is not None and name not in manifest.avg_star_exclude
        ]
        average_star = math.fsum(star) / len(star) if star else None
    return EvalReport(
        benchmark_id=manifest.benchmark_id,
        backend=backend.identity(),
        config_hash=config_hash,
        scale=scale,
        datasets=results,
        average_auc=average,
        average_auc_star=average_star,
        avg_star_exclude=manifest.avg_star_exclude if avg_star else (),
        warnings=report_warnings,
    )
