"""Deterministic tokenization, sentence splitting, and greedy context chunking.

Everything here is pure and rule-based so that scoring runs are exactly
reproducible with no model on the box. Chunk boundaries are authoritative:
downstream backends receive chunk text and may re-tokenize internally.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

from .errors import ConfigError

DEFAULT_CHUNK_BUDGET = 350

_TERMINATORS = frozenset(".!?")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class TokenizerSpec:
    """Tokenization scheme plus the chunk token budget.

    The default scheme splits on Unicode whitespace and detaches leading and
    trailing punctuation as separate tokens. An external tokenizer can be
    plugged in as a callable returning the token list; its token count then
    becomes the chunking currency.
    """

    scheme: str = "whitespace-punct"
    chunk_budget: int = DEFAULT_CHUNK_BUDGET
    abbrev_path: str | None = None
    external_tokenizer: Callable[[str], list[str]] | None = field(
        default=None, compare=False, hash=False
    )

    def __post_init__(self):
        if self.chunk_budget < 1:
            raise ConfigError(f"chunk_budget must be >= 1, got {self.chunk_budget}")
        if self.scheme not in ("whitespace-punct", "pluggable-external"):
            raise ConfigError(f"unknown tokenizer scheme {self.scheme!r}")
        if self.scheme == "pluggable-external" and self.external_tokenizer is None:
            raise ConfigError("pluggable-external scheme requires external_tokenizer")


@dataclass(frozen=True)
class ChunkedInput:
    """Segmented (context, claim) pair ready for the alignment function."""

    chunks: list[str]
    sentences: list[str]
    chunk_token_counts: list[int]


def _detach_punct(raw: str) -> list[str]:
    """Split off leading/trailing punctuation characters as their own tokens."""
    lead = []
    while raw and _is_punct(raw[0]):
        lead.append(raw[0])
        raw = raw[1:]
    trail = []
    while raw and _is_punct(raw[-1]):
        trail.append(raw[-1])
        raw = raw[:-1]
    out = lead
    if raw:
        out.append(raw)
    out.extend(reversed(trail))
    return out


def tokenize(text: str, spec: TokenizerSpec | None = None) -> list[str]:
    """Deterministic tokenization; token count is the chunking currency."""
    if spec is not None and spec.external_tokenizer is not None:
        return list(spec.external_tokenizer(text))
    tokens: list[str] = []
    for raw in text.split():
        tokens.extend(_detach_punct(raw))
    return tokens


def tokenize_with_offsets(text: str) -> list[tuple[str, int, int]]:
    """Default-scheme tokens with (start, end) character offsets into text."""
    out: list[tuple[str, int, int]] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        start = i
        end = j
        # leading punctuation
        while start < end and _is_punct(text[start]):
            out.append((text[start], start, start + 1))
            start += 1
        # trailing punctuation, collected then emitted in order
        trail_start = end
        while trail_start > start and _is_punct(text[trail_start - 1]):
            trail_start -= 1
        if start < trail_start:
            out.append((text[start:trail_start], start, trail_start))
        for k in range(trail_start, end):
            out.append((text[k], k, k + 1))
        i = j
    return out


@lru_cache(maxsize=8)
def _load_abbreviations(path_str: str | None) -> tuple[frozenset[str], frozenset[str]]:
    """Guard entries split into case-sensitive and case-insensitive sets.

    Entries containing an uppercase letter (Mr., Sat., U.S.) match exactly,
    so ordinary words like "sat" cannot trip the weekday guard; all-lowercase
    entries (e.g., i.e., etc.) match casefolded.
    """
    if path_str is None:
        text = resources.files("factalign.data").joinpath("abbreviations.txt").read_text("utf-8")
    else:
        text = Path(path_str).read_text(encoding="utf-8")
    cased = set()
    lower = set()
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        entry = line.rstrip(".")
        if entry.lower() != entry:
            cased.add(entry)
        else:
            lower.add(entry.casefold())
    return frozenset(cased), frozenset(lower)


def abbreviations(path: str | Path | None = None) -> tuple[frozenset[str], frozenset[str]]:
    """Guard list of abbreviations that never terminate a sentence."""
    return _load_abbreviations(str(path) if path is not None else None)


def _word_before(text: str, idx: int) -> str:
    """The non-space run immediately preceding text[idx]."""
    k = idx
    while k > 0 and not text[k - 1].isspace():
        k -= 1
    return text[k:idx]


def split_sentences(text: str, abbrev_path: str | Path | None = None) -> list[str]:
    """Split text into sentences at {. ! ?} followed by whitespace+uppercase.

    A terminator also ends a sentence at end-of-text. A period preceded by a
    guarded abbreviation never terminates. Text without any terminator comes
    back as a single sentence; empty text yields no sentences.
    """
    cased_guards, lower_guards = abbreviations(abbrev_path)
    sentences: list[str] = []
    start = 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch not in _TERMINATORS:
            continue
        j = i + 1
        while j < n and text[j].isspace():
            j += 1
        at_end = j >= n
        if not at_end and (j == i + 1 or not text[j].isupper()):
            continue  # needs whitespace then an uppercase letter
        if ch == ".":
            word = _word_before(text, i).lstrip("\"'([{“‘").rstrip(".")
            if word in cased_guards or word.casefold() in lower_guards:
                continue
        piece = text[start : i + 1].strip()
        if piece:
            sentences.append(piece)
        start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def chunk_context(context: str, spec: TokenizerSpec | None = None) -> list[str]:
    """Greedy sentence packing into chunks of at most chunk_budget tokens.

    A sentence that would overflow the current chunk starts a new one; a
    single sentence longer than the budget becomes its own oversized chunk.
    Sentences are never split.
    """
    return segment_context(context, spec).chunks


def segment_context(context: str, spec: TokenizerSpec | None = None) -> ChunkedInput:
    spec = spec or TokenizerSpec()
    sentences = split_sentences(context, spec.abbrev_path)
    chunks: list[str] = []
    counts: list[int] = []
    cur: list[str] = []
    cur_tokens = 0
    for sentence in sentences:
        n_tokens = len(tokenize(sentence, spec))
        if cur and cur_tokens + n_tokens > spec.chunk_budget:
            chunks.append(" ".join(cur))
            counts.append(cur_tokens)
            cur = []
            cur_tokens = 0
        cur.append(sentence)
        cur_tokens += n_tokens
    if cur:
        chunks.append(" ".join(cur))
        counts.append(cur_tokens)
    return ChunkedInput(chunks=chunks, sentences=sentences, chunk_token_counts=counts)


def segment_pair(context: str, claim: str, spec: TokenizerSpec | None = None) -> ChunkedInput:
    """Chunk the context and split the claim into sentences."""
    spec = spec or TokenizerSpec()
    ctx = segment_context(context, spec)
    claim_sentences = split_sentences(claim, spec.abbrev_path)
    return ChunkedInput(
        chunks=ctx.chunks,
        sentences=claim_sentences,
        chunk_token_counts=ctx.chunk_token_counts,
    )
