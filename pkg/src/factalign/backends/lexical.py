"""Deterministic lexical alignment backend.

A desk-scale stand-in for a trained alignment model: aligned probability is
the token-overlap F1 between sentence and chunk (lowercased multisets), and
the non-aligned remainder is split between contradiction and neutral by the
share of entity tokens (numeric or capitalized) missing from the chunk.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..engine import AlignmentMatrix
from ..errors import DegenerateInputError
from ..segment import TokenizerSpec, tokenize


def _is_capitalized(token: str) -> bool:
    return bool(token) and token[0].isupper() and token[0].isalpha()


def _is_numeric(token: str) -> bool:
    return any(ch.isdigit() for ch in token)


def _first_word_index(tokens: list[str]) -> int:
    for i, tok in enumerate(tokens):
        if tok and tok[0].isalpha():
            return i
    return -1


def entity_flags(sentence_tokens: list[list[str]]) -> list[list[bool]]:
    """Mark numeric and capitalized tokens per sentence.

    The sentence-leading word only counts as capitalized if the same token
    also appears capitalized mid-sentence somewhere in the claim; this keeps
    ordinary sentence-initial capitalization from reading as an entity.
    """
    mid_capitalized: set[str] = set()
    leads = [_first_word_index(toks) for toks in sentence_tokens]
    for toks, lead in zip(sentence_tokens, leads):
        for i, tok in enumerate(toks):
            if i != lead and _is_capitalized(tok):
                mid_capitalized.add(tok.lower())
    flags: list[list[bool]] = []
    for toks, lead in zip(sentence_tokens, leads):
        row = []
        for i, tok in enumerate(toks):
            if _is_numeric(tok):
                row.append(True)
            elif _is_capitalized(tok):
                row.append(i != lead or tok.lower() in mid_capitalized)
            else:
                row.append(False)
        flags.append(row)
    return flags


class LexicalBackend:
    """Fully deterministic; safe for unrestricted concurrent calls."""

    kind = "lexical"
    concurrent_safe = True

    def __init__(self, spec: TokenizerSpec | None = None):
        self.spec = spec or TokenizerSpec()

    def identity(self) -> dict:
        return {"kind": self.kind, "kernel": kernels.IMPLEMENTATION}

    def align(self, chunks: list[str], sentences: list[str], sample_id=None) -> AlignmentMatrix:
        if not chunks or not sentences:
            raise DegenerateInputError("lexical backend needs at least one chunk and one sentence")
        sent_tokens = [tokenize(s, self.spec) for s in sentences]
        chunk_tokens = [tokenize(c, self.spec) for c in chunks]
        flags = entity_flags(sent_tokens)

        vocab: dict[str, int] = {}

        def intern(tok: str) -> int:
            key = tok.lower()
            idx = vocab.get(key)
            if idx is None:
                idx = len(vocab)
                vocab[key] = idx
            return idx

        su_ids: list[int] = []
        su_counts: list[int] = []
        su_indptr = [0]
        se_ids: list[int] = []
        se_indptr = [0]
        sent_lens: list[int] = []
        for toks, flag_row in zip(sent_tokens, flags):
            counts: dict[int, int] = {}
            for tok in toks:
                tid = intern(tok)
                counts[tid] = counts.get(tid, 0) + 1
            su_ids.extend(counts.keys())
            su_counts.extend(counts.values())
            su_indptr.append(len(su_ids))
            for tok, is_entity in zip(toks, flag_row):
                if is_entity:
                    se_ids.append(intern(tok))
            se_indptr.append(len(se_ids))
            sent_lens.append(len(toks))
        c_ids: list[int] = []
        c_indptr = [0]
        for toks in chunk_tokens:
            c_ids.extend(intern(tok) for tok in toks)
            c_indptr.append(len(c_ids))

        probs = kernels.lexical_probs(
            np.asarray(su_ids, dtype=np.int32),
            np.asarray(su_counts, dtype=np.int32),
            np.asarray(su_indptr, dtype=np.int64),
            np.asarray(se_ids, dtype=np.int32),
            np.asarray(se_indptr, dtype=np.int64),
            np.asarray(sent_lens, dtype=np.int64),
            np.asarray(c_ids, dtype=np.int32),
            np.asarray(c_indptr, dtype=np.int64),
            len(vocab),
        )
        return AlignmentMatrix.from_array(probs)
