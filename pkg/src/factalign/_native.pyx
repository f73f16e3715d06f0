# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lexical alignment kernel.

Same contract and bit-identical float64 results as factalign.kernels.pure;
see that module for the formula. Token ids must be dense in [0, vocab_size).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def lexical_probs(
    cnp.int32_t[::1] su_ids,
    cnp.int32_t[::1] su_counts,
    cnp.int64_t[::1] su_indptr,
    cnp.int32_t[::1] se_ids,
    cnp.int64_t[::1] se_indptr,
    cnp.int64_t[::1] sent_lens,
    cnp.int32_t[::1] c_ids,
    cnp.int64_t[::1] c_indptr,
    Py_ssize_t vocab_size,
):
    cdef Py_ssize_t n_sent = su_indptr.shape[0] - 1
    cdef Py_ssize_t n_chunk = c_indptr.shape[0] - 1
    out_arr = np.empty((n_sent, n_chunk, 3), dtype=np.float64)
    cdef cnp.float64_t[:, :, ::1] out = out_arr
    counts_arr = np.zeros(max(vocab_size, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] counts = counts_arr

    cdef Py_ssize_t c, s, k, lo, hi, ent_lo, ent_hi
    cdef long long overlap, have, want, chunk_len, denom, absent, n_entities
    cdef double f1, remainder, ratio, p_contra

    for c in range(n_chunk):
        lo = c_indptr[c]
        hi = c_indptr[c + 1]
        for k in range(lo, hi):
            counts[c_ids[k]] += 1
        chunk_len = hi - lo
        for s in range(n_sent):
            overlap = 0
            for k in range(su_indptr[s], su_indptr[s + 1]):
                have = counts[su_ids[k]]
                want = su_counts[k]
                overlap += have if have < want else want
            denom = sent_lens[s] + chunk_len
            f1 = (2.0 * overlap) / denom if denom > 0 else 0.0
            ent_lo = se_indptr[s]
            ent_hi = se_indptr[s + 1]
            absent = 0
            for k in range(ent_lo, ent_hi):
                if counts[se_ids[k]] == 0:
                    absent += 1
            n_entities = ent_hi - ent_lo
            remainder = 1.0 - f1
            ratio = (<double> absent) / (<double> n_entities) if n_entities > 0 else 0.0
            p_contra = remainder * ratio
            out[s, c, 0] = f1
            out[s, c, 1] = remainder - p_contra
            out[s, c, 2] = p_contra
        # reset scratch counts for the next chunk
        for k in range(lo, hi):
            counts[c_ids[k]] = 0
    return out_arr
