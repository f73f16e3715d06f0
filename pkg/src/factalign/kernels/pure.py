"""Pure-Python lexical alignment kernel.

Reference implementation; the compiled extension must produce bit-identical
float64 output, so the arithmetic here is written in the exact operation
order the C code uses.
"""

from __future__ import annotations

import numpy as np


def lexical_probs(su_ids, su_counts, su_indptr, se_ids, se_indptr, sent_lens, c_ids, c_indptr, vocab_size):
    """Per-(sentence, chunk) probabilities over (aligned, neutral, contradiction).

    Sentences arrive as CSR-packed unique token ids with multiplicities plus
    per-occurrence entity token ids; chunks as CSR-packed token id sequences.
    aligned = token-overlap F1; contradiction = (1 - F1) scaled by the share
    of entity tokens absent from the chunk; neutral absorbs the rest.
    """
    n_sent = len(su_indptr) - 1
    n_chunk = len(c_indptr) - 1
    out = np.empty((n_sent, n_chunk, 3), dtype=np.float64)
    for c in range(n_chunk):
        lo = int(c_indptr[c])
        hi = int(c_indptr[c + 1])
        counts: dict[int, int] = {}
        for k in range(lo, hi):
            tok = int(c_ids[k])
            counts[tok] = counts.get(tok, 0) + 1
        chunk_len = hi - lo
        for s in range(n_sent):
            overlap = 0
            for k in range(int(su_indptr[s]), int(su_indptr[s + 1])):
                have = counts.get(int(su_ids[k]), 0)
                want = int(su_counts[k])
                overlap += have if have < want else want
            denom = int(sent_lens[s]) + chunk_len
            f1 = (2.0 * overlap) / denom if denom > 0 else 0.0
            ent_lo = int(se_indptr[s])
            ent_hi = int(se_indptr[s + 1])
            absent = 0
            for k in range(ent_lo, ent_hi):
                if counts.get(int(se_ids[k]), 0) == 0:
                    absent += 1
            n_entities = ent_hi - ent_lo
            remainder = 1.0 - f1
            ratio = absent / n_entities if n_entities > 0 else 0.0
            p_contra = remainder * ratio
            out[s, c, 0] = f1
            out[s, c, 1] = remainder - p_contra
            out[s, c, 2] = p_contra
    return out
