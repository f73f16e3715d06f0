"""Synthetic robustness data: entity detection, perturbation, verification,
and span replacement.

Generation is two-step by design: perturb the entity string in isolation,
then splice it back into the claim. The claim is never handed to an LLM
whole. A deterministic stub perturber ships so the whole module runs and
tests offline; the LLM path talks to a plain completion endpoint.
"""

from __future__ import annotations

import json
import logging
import random
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import requests

from .core import Label3, UnifiedSample
from .errors import ConfigError, DataError, TransportError
from .numbers import (
    MONTHS,
    is_number_word,
    is_ordinal_word,
    month_index,
    parse_digit_token,
    parse_values,
    render_cardinal,
    render_grouped,
    render_ordinal_suffix,
    render_ordinal_words,
    values_equal,
)
from .segment import tokenize_with_offsets

logger = logging.getLogger(__name__)


class EntityKind(Enum):
    PERSON = "person"
    ORG = "org"
    TIME = "time"
    QUANTITY = "quantity"
    DATE = "date"
    NUMBER_LIKE = "number-like"


NAME_KINDS = frozenset({EntityKind.PERSON, EntityKind.ORG})
NUMBER_KINDS = frozenset(
    {EntityKind.TIME, EntityKind.QUANTITY, EntityKind.DATE, EntityKind.NUMBER_LIKE}
)


class PerturbMode(Enum):
    NAME_CHANGE = "name-change"
    NUM_CHANGE = "num-change"
    NUM_REPHRASE = "num-rephrase"


class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


MODE_POLARITY = {
    PerturbMode.NAME_CHANGE: Polarity.NEGATIVE,
    PerturbMode.NUM_CHANGE: Polarity.NEGATIVE,
    PerturbMode.NUM_REPHRASE: Polarity.POSITIVE,
}


@dataclass(frozen=True)
class EntitySpan:
    start: int
    end: int
    surface: str
    kind: EntityKind

    def check_against(self, claim: str) -> bool:
        return claim[self.start : self.end] == self.surface


@dataclass(frozen=True)
class PerturbationRecord:
    source_sample_id: str
    span: EntitySpan
    mode: PerturbMode
    replacement: str
    polarity: Polarity
    verified: bool

    def __post_init__(self):
        if MODE_POLARITY[self.mode] is not self.polarity:
            raise DataError(
                f"mode {self.mode.value} implies polarity {MODE_POLARITY[self.mode].value}"
            )


_TEMPORAL_UNITS = {
    "year", "years", "month", "months", "week", "weeks", "day", "days",
    "hour", "hours", "minute", "minutes", "seconds", "decade", "decades",
    "century", "centuries",
}
_MEASURE_UNITS = {
    "ft", "feet", "foot", "meter", "meters", "metre", "metres", "km", "mi",
    "mile", "miles", "kg", "lb", "lbs", "pound", "pounds", "percent", "ton",
    "tons", "tonne", "tonnes", "inch", "inches", "acre", "acres",
}


def _is_cap_word(token: str) -> bool:
    return len(token) >= 2 and token[0].isupper() and token.isalpha()


class RuleEntityDetector:
    """Rule-based fallback detector, used when no external tagger is plugged in.

    Names: maximal runs of two or more capitalized alphabetic tokens, never
    including the claim-leading word. Numbers: runs of digit-bearing tokens,
    number words, and capitalized month names, extended by one trailing unit
    word. Overlaps resolve longest-match-first.
    """

    name = "rule-fallback"

    def detect(self, claim: str) -> list[EntitySpan]:
        tokens = tokenize_with_offsets(claim)
        first_word = next(
            (i for i, (tok, _, _) in enumerate(tokens) if tok[:1].isalnum()), -1
        )
        candidates: list[EntitySpan] = []

        # capitalized name runs
        run: list[int] = []
        for i, (tok, _, _) in enumerate(tokens):
            if _is_cap_word(tok) and i != first_word and month_index(tok) is None:
                run.append(i)
            else:
                self._flush_name(run, tokens, claim, candidates)
                run = []
        self._flush_name(run, tokens, claim, candidates)

        # number-ish runs
        def is_numberish(tok: str) -> bool:
            if any(ch.isdigit() for ch in tok):
                return True
            if is_number_word(tok):
                return True
            return month_index(tok) is not None and tok[:1].isupper()

        i = 0
        while i < len(tokens):
            if not is_numberish(tokens[i][0]):
                i += 1
                continue
            j = i
            while j + 1 < len(tokens) and is_numberish(tokens[j + 1][0]):
                j += 1
            has_month = any(
                month_index(tokens[k][0]) is not None and tokens[k][0][:1].isupper()
                for k in range(i, j + 1)
            )
            kind = EntityKind.DATE if has_month else EntityKind.NUMBER_LIKE
            end_idx = j
            if j + 1 < len(tokens) and not has_month:
                unit = tokens[j + 1][0].casefold()
                if unit in _TEMPORAL_UNITS:
                    end_idx = j + 1
                    kind = EntityKind.TIME
                elif unit in _MEASURE_UNITS:
                    end_idx = j + 1
                    kind = EntityKind.QUANTITY
            start = tokens[i][1]
            end = tokens[end_idx][2]
            candidates.append(EntitySpan(start, end, claim[start:end], kind))
            i = end_idx + 1

        return _resolve_overlaps(candidates)

    @staticmethod
    def _flush_name(run: list[int], tokens, claim: str, out: list[EntitySpan]) -> None:
        if len(run) < 2:
            return
        start = tokens[run[0]][1]
        end = tokens[run[-1]][2]
        out.append(EntitySpan(start, end, claim[start:end], EntityKind.PERSON))


def _resolve_overlaps(candidates: list[EntitySpan]) -> list[EntitySpan]:
    """Non-overlapping spans sorted by start; longest match wins."""
    chosen: list[EntitySpan] = []
    for span in sorted(candidates, key=lambda s: (-(s.end - s.start), s.start, s.kind.value)):
        if all(span.end <= c.start or span.start >= c.end for c in chosen):
            chosen.append(span)
    return sorted(chosen, key=lambda s: s.start)


def detect_entities(claim: str, detector=None) -> list[EntitySpan]:
    """Detect entity spans; spans are validated non-overlapping and in order."""
    detector = detector or RuleEntityDetector()
    spans = detector.detect(claim)
    last_end = -1
    for span in spans:
        if not span.check_against(claim):
            raise DataError(f"detector returned a span that does not match the claim: {span}")
        if span.start < last_end:
            raise DataError("detector returned overlapping spans")
        last_end = span.end
    return spans


def normalize_surface(text: str) -> str:
    """Casefold, punctuation to spaces, collapse whitespace."""
    out = []
    for ch in text.casefold():
        out.append(ch if ch.isalnum() or ch.isspace() else " ")
    return " ".join("".join(out).split())


def verify_perturbation(original: str, replacement: str, mode: PerturbMode) -> bool:
    """Check a perturbation did what its mode promises; False on any doubt."""
    if not replacement or not replacement.strip():
        return False
    if mode is PerturbMode.NAME_CHANGE:
        return normalize_surface(original) != normalize_surface(replacement)
    equal = values_equal(original, replacement)
    if mode is PerturbMode.NUM_CHANGE:
        if equal is None:
            return normalize_surface(original) != normalize_surface(replacement)
        return not equal
    # NUM_REPHRASE: same value, different surface
    return bool(equal) and normalize_surface(original) != normalize_surface(replacement)


@dataclass(frozen=True)
class PerturbResult:
    replacement: str | None
    prompt: str | None = None
    completion: str | None = None
    backend: str = "stub"


_GROUPED_ONLY = re.compile(r"^\d{1,3}(?:,\d{3})+$")
_DECIMAL_ONLY = re.compile(r"^(\d+)\.(\d+)$")
_ORDINAL_ONLY = re.compile(r"^(\d+)(st|nd|rd|th)$", re.IGNORECASE)


class StubPerturber:
    """Deterministic offline perturber: letter swap for names, +1 for
    numbers, digit/word toggle for rephrasing."""

    backend_name = "stub"

    def perturb(self, surface: str, mode: PerturbMode) -> PerturbResult:
        if mode is PerturbMode.NAME_CHANGE:
            return PerturbResult(self._swap_name(surface))
        if mode is PerturbMode.NUM_CHANGE:
            return PerturbResult(self._change_number(surface))
        return PerturbResult(self._rephrase_number(surface))

    @staticmethod
    def _swap_name(surface: str) -> str | None:
        words = surface.split()
        for idx in range(len(words) - 1, -1, -1):
            word = words[idx]
            core = word.strip(".,;:'\"")
            if len(core) >= 3 and core.isalpha():
                for a in range(1, len(core) - 1):
                    if core[a] != core[a + 1]:
                        swapped = core[:a] + core[a + 1] + core[a] + core[a + 2 :]
                        words[idx] = word.replace(core, swapped, 1)
                        return " ".join(words)
        # all candidate words are too short or single-letter runs: bump a letter
        for idx in range(len(words) - 1, -1, -1):
            word = words[idx]
            for a in range(len(word) - 1, -1, -1):
                ch = word[a]
                if ch.isalpha():
                    base = "a" if ch.islower() else "A"
                    bumped = chr((ord(ch) - ord(base) + 1) % 26 + ord(base))
                    words[idx] = word[:a] + bumped + word[a + 1 :]
                    return " ".join(words)
        return None

    def _components(self, surface: str):
        """Digit tokens, capitalized months, and single-value word runs."""
        tokens = tokenize_with_offsets(surface)
        comps = []
        i = 0
        while i < len(tokens):
            tok, start, end = tokens[i]
            if any(ch.isdigit() for ch in tok) and parse_digit_token(tok) is not None:
                comps.append(("digit", start, end, tok))
                i += 1
                continue
            midx = month_index(tok)
            if midx is not None and tok[:1].isupper():
                comps.append(("month", start, end, tok))
                i += 1
                continue
            if is_number_word(tok):
                j = i
                while j + 1 < len(tokens) and is_number_word(tokens[j + 1][0]):
                    j += 1
                run_start = tokens[i][1]
                run_end = tokens[j][2]
                comps.append(("words", run_start, run_end, surface[run_start:run_end]))
                i = j + 1
                continue
            i += 1
        return comps

    def _change_number(self, surface: str) -> str | None:
        for kind, start, end, text in self._components(surface):
            new = self._incremented(kind, text)
            if new is not None:
                return surface[:start] + new + surface[end:]
        return None

    def _rephrase_number(self, surface: str) -> str | None:
        for kind, start, end, text in self._components(surface):
            new = self._toggled(kind, text)
            if new is not None:
                return surface[:start] + new + surface[end:]
        return None

    @staticmethod
    def _incremented(kind: str, text: str) -> str | None:
        if kind == "digit":
            m = _DECIMAL_ONLY.match(text)
            if m:
                return f"{int(m.group(1)) + 1}.{m.group(2)}"
            m = _ORDINAL_ONLY.match(text)
            if m:
                return render_ordinal_suffix(int(m.group(1)) + 1)
            if _GROUPED_ONLY.match(text):
                return render_grouped(int(text.replace(",", "")) + 1)
            if text.isdigit():
                return str(int(text) + 1)
            return None
        if kind == "month":
            idx = month_index(text)
            nxt = MONTHS[idx % 12]
            return nxt.capitalize() if text[:1].isupper() else nxt
        # word run
        values = parse_values(text)
        if len(values) != 1 or values[0][0] != "n":
            return None
        value = values[0][1]
        if value.denominator != 1:
            return None
        n = int(value) + 1
        return render_ordinal_words(n) if is_ordinal_word(text) else render_cardinal(n)

    @staticmethod
    def _toggled(kind: str, text: str) -> str | None:
        if kind == "digit":
            m = _ORDINAL_ONLY.match(text)
            if m:
                return render_ordinal_words(int(m.group(1)))
            if _GROUPED_ONLY.match(text):
                return render_cardinal(int(text.replace(",", "")))
            if text.isdigit():
                return render_cardinal(int(text))
            return None  # decimals have no word form here
        if kind == "month":
            return None
        values = parse_values(text)
        if len(values) != 1 or values[0][0] != "n":
            return None
        value = values[0][1]
        if value.denominator != 1:
            return None
        return render_ordinal_suffix(int(value)) if is_ordinal_word(text) else str(int(value))


_PROMPT_FILES = {
    PerturbMode.NAME_CHANGE: "name_change.txt",
    PerturbMode.NUM_CHANGE: "num_change.txt",
    PerturbMode.NUM_REPHRASE: "num_rephrase.txt",
}


def load_prompt_template(mode: PerturbMode) -> str:
    return (
        resources.files("factalign.data.prompts")
        .joinpath(_PROMPT_FILES[mode])
        .read_text("utf-8")
    )


class HttpLlmClient:
    """Minimal completion client: POST {"prompt", "max_tokens", "temperature"}."""

    def __init__(self, endpoint: str, timeout: float = 60.0):
        if not endpoint:
            raise ConfigError("LLM backend requires an endpoint")
        self.endpoint = endpoint
        self.timeout = timeout
        self.session = requests.Session()

    def complete(self, prompt: str, max_tokens: int = 32, temperature: float = 0.0) -> str:
        try:
            resp = self.session.post(
                self.endpoint,
                json={"prompt": prompt, "max_tokens": max_tokens, "temperature": temperature},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TransportError(f"LLM call failed: {exc}") from exc
        if resp.status_code != 200:
            raise TransportError(f"LLM endpoint returned {resp.status_code}")
        try:
            return resp.json()["text"]
        except (ValueError, KeyError) as exc:
            raise TransportError(f"malformed LLM response: {exc!r}") from exc


class LlmPerturber:
    """Prompts a completion endpoint with the mode's few-shot template.

    Takes the first line of the completion; transport failures and empty
    completions are retried once, then the span is skipped.
    """

    backend_name = "llm"

    def __init__(self, client):
        self.client = client
        self._templates = {mode: load_prompt_template(mode) for mode in PerturbMode}

    def perturb(self, surface: str, mode: PerturbMode) -> PerturbResult:
        prompt = self._templates[mode].replace("{surface}", surface)
        completion = None
        for _ in range(2):
            try:
                completion = self.client.complete(prompt)
            except TransportError as exc:
                logger.warning("perturbation call failed, retrying once: %s", exc)
                continue
            lines = [ln.strip() for ln in completion.splitlines() if ln.strip()]
            if lines:
                return PerturbResult(lines[0], prompt=prompt, completion=completion, backend="llm")
        return PerturbResult(None, prompt=prompt, completion=completion, backend="llm")


@dataclass
class SynthStats:
    sources_read: int = 0
    sources_skipped: int = 0  # wrong label, no spans, or detector failure
    spans_considered: int = 0
    perturbations_attempted: int = 0
    perturbations_unverified: int = 0
    records_dropped_drift: int = 0
    emitted_positive: int = 0
    emitted_negative: int = 0
    emitted_original: int = 0

    def as_dict(self) -> dict:
        return dict(vars(self))


def assemble_dataset(
    sources: list[UnifiedSample],
    records: list[PerturbationRecord],
    dataset_id: str,
    stats: SynthStats | None = None,
) -> list[UnifiedSample]:
    """Splice verified perturbations into their source claims.

    Emits the original claim (ALIGNED) for every source that produced at
    least one verified record, then one sample per record: NEGATIVE records
    become CONTRADICTION, POSITIVE records ALIGNED. Records whose span no
    longer matches the claim are dropped.
    """
    stats = stats or SynthStats()
    by_source: dict[str, list[PerturbationRecord]] = {}
    for record in records:
        if record.verified:
            by_source.setdefault(record.source_sample_id, []).append(record)
    out: list[UnifiedSample] = []
    for source in sources:
        mine = by_source.get(source.sample_id, [])
        if not mine:
            continue
        out.append(
            UnifiedSample(
                context=source.context,
                claim=source.claim,
                label=Label3.ALIGNED,
                dataset_id=dataset_id,
                sample_id=f"{source.sample_id}::orig",
            )
        )
        stats.emitted_original += 1
        for k, record in enumerate(mine):
            if not record.span.check_against(source.claim):
                stats.records_dropped_drift += 1
                continue
            claim = (
                source.claim[: record.span.start]
                + record.replacement
                + source.claim[record.span.end :]
            )
            label = Label3.ALIGNED if record.polarity is Polarity.POSITIVE else Label3.CONTRADICTION
            out.append(
                UnifiedSample(
                    context=source.context,
                    claim=claim,
                    label=label,
                    dataset_id=dataset_id,
                    sample_id=f"{source.sample_id}::p{k}",
                )
            )
            if record.polarity is Polarity.POSITIVE:
                stats.emitted_positive += 1
            else:
                stats.emitted_negative += 1
    return out


@dataclass
class SynthResult:
    train: list[UnifiedSample]
    test: list[UnifiedSample]
    audit: list[dict]
    stats: SynthStats
    dataset_id: str


def generate_robustness_dataset(
    sources,
    mode: str,
    perturber=None,
    detector=None,
    seed: int = 0,
    test_fraction: float = 0.15,
    max_spans_per_claim: int | None = None,
) -> SynthResult:
    """Run detection, perturbation, verification, and assembly end to end.

    mode "name" perturbs PERSON/ORG spans (negatives only); mode "num"
    perturbs number-related spans, emitting a value-changing negative and a
    value-preserving positive per span. The train/test split is a seeded
    shuffle of source samples, so originals and their perturbations never
    straddle the split.
    """
    if mode not in ("name", "num"):
        raise ConfigError(f"mode must be 'name' or 'num', got {mode!r}")
    perturber = perturber or StubPerturber()
    detector = detector or RuleEntityDetector()
    dataset_id = f"robust_{mode}"
    kinds = NAME_KINDS if mode == "name" else NUMBER_KINDS
    span_modes = (
        (PerturbMode.NAME_CHANGE,)
        if mode == "name"
        else (PerturbMode.NUM_CHANGE, PerturbMode.NUM_REPHRASE)
    )

    stats = SynthStats()
    kept_sources: list[UnifiedSample] = []
    records: list[PerturbationRecord] = []
    audit: list[dict] = []
    for source in sources:
        stats.sources_read += 1
        if source.label is not Label3.ALIGNED:
            stats.sources_skipped += 1
            continue
        try:
            spans = [s for s in detect_entities(source.claim, detector) if s.kind in kinds]
        except DataError as exc:
            logger.warning("skipping %s: %s", source.sample_id, exc)
            stats.sources_skipped += 1
            continue
        if max_spans_per_claim is not None:
            spans = spans[:max_spans_per_claim]
        if not spans:
            stats.sources_skipped += 1
            continue
        kept_sources.append(source)
        for span in spans:
            stats.spans_considered += 1
            for perturb_mode in span_modes:
                stats.perturbations_attempted += 1
                result = perturber.perturb(span.surface, perturb_mode)
                if result.replacement is None:
                    stats.perturbations_unverified += 1
                    continue
                verified = verify_perturbation(span.surface, result.replacement, perturb_mode)
                if not verified:
                    stats.perturbations_unverified += 1
                record = PerturbationRecord(
                    source_sample_id=source.sample_id,
                    span=span,
                    mode=perturb_mode,
                    replacement=result.replacement,
                    polarity=MODE_POLARITY[perturb_mode],
                    verified=verified,
                )
                records.append(record)
                audit.append(
                    {
                        "source_id": source.sample_id,
                        "span": {
                            "start": span.start,
                            "end": span.end,
                            "surface": span.surface,
                            "kind": span.kind.value,
                        },
                        "mode": perturb_mode.value,
                        "replacement": result.replacement,
                        "polarity": MODE_POLARITY[perturb_mode].value,
                        "verified": verified,
                        "backend": result.backend,
                        "prompt": result.prompt,
                        "completion": result.completion,
                    }
                )

    samples = assemble_dataset(kept_sources, records, dataset_id, stats)

    # seeded split by source sample, originals and perturbations together
    source_ids = [s.sample_id for s in kept_sources]
    shuffled = list(source_ids)
    random.Random(seed).shuffle(shuffled)
    n_test = round(len(shuffled) * test_fraction)
    test_ids = set(shuffled[:n_test])
    train: list[UnifiedSample] = []
    test: list[UnifiedSample] = []
    for sample in samples:
        root_id = sample.sample_id.rsplit("::", 1)[0]
        (test if root_id in test_ids else train).append(sample)
    return SynthResult(train=train, test=test, audit=audit, stats=stats, dataset_id=dataset_id)


def write_synth_result(result: SynthResult, out_dir: str | Path, config_hash: str = "") -> dict:
    """Write train/test JSONL, the audit log, and a summary; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "train": out_dir / f"{result.dataset_id}.train.jsonl",
        "test": out_dir / f"{result.dataset_id}.test.jsonl",
        "audit": out_dir / f"{result.dataset_id}.audit.jsonl",
        "summary": out_dir / f"{result.dataset_id}.summary.json",
    }
    with paths["train"].open("w", encoding="utf-8") as fh:
        for sample in result.train:
            fh.write(sample.to_json_line() + "\n")
    with paths["test"].open("w", encoding="utf-8") as fh:
        for sample in result.test:
            fh.write(sample.to_json_line() + "\n")
    with paths["audit"].open("w", encoding="utf-8") as fh:
        for entry in result.audit:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
    summary = {
        "dataset": result.dataset_id,
        "config_hash": config_hash,
        "train_samples": len(result.train),
        "test_samples": len(result.test),
        "stats": result.stats.as_dict(),
    }
    paths["summary"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return {k: str(v) for k, v in paths.items()}


def read_unified_jsonl(path: str | Path) -> list[UnifiedSample]:
    """Load a UnifiedSample JSONL file, skipping blank lines."""
    samples = []
    path = Path(path)
    if not path.exists():
        raise DataError(f"source file not found: {path}")
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                samples.append(UnifiedSample.from_json_line(line))
            except DataError as exc:
                raise DataError(f"{path}:{line_no}: {exc}") from exc
    return samples
