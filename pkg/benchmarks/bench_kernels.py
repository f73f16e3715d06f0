#!/usr/bin/env python3
"""Benchmark the compiled lexical-alignment kernel against the pure-Python
fallback on a synthetic scoring workload, and verify they agree bit for bit.

Usage: python benchmarks/bench_kernels.py [--pairs N] [--chunk-tokens N]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from factalign.kernels import pure

try:
    from factalign import _native
except ImportError:
    _native = None


def build_workload(n_pairs: int, chunk_tokens: int, seed: int = 0):
    """CSR-packed inputs mimicking benchmark-scale scoring calls."""
    rng = random.Random(seed)
    workload = []
    for _ in range(n_pairs):
        vocab_size = rng.randint(40, 400)
        n_sent = rng.randint(1, 4)
        n_chunk = rng.randint(1, 4)
        su_ids, su_counts, su_indptr = [], [], [0]
        se_ids, se_indptr = [], [0]
        sent_lens = []
        for _ in range(n_sent):
            tokens = [rng.randrange(vocab_size) for _ in range(rng.randint(8, 30))]
            counts: dict[int, int] = {}
            for t in tokens:
                counts[t] = counts.get(t, 0) + 1
            su_ids.extend(counts)
            su_counts.extend(counts.values())
            su_indptr.append(len(su_ids))
            se_ids.extend(t for t in tokens if rng.random() < 0.2)
            se_indptr.append(len(se_ids))
            sent_lens.append(len(tokens))
        c_ids, c_indptr = [], [0]
        for _ in range(n_chunk):
            c_ids.extend(rng.randrange(vocab_size) for _ in range(chunk_tokens))
            c_indptr.append(len(c_ids))
        workload.append(
            (
                np.asarray(su_ids, dtype=np.int32),
                np.asarray(su_counts, dtype=np.int32),
                np.asarray(su_indptr, dtype=np.int64),
                np.asarray(se_ids, dtype=np.int32),
                np.asarray(se_indptr, dtype=np.int64),
                np.asarray(sent_lens, dtype=np.int64),
                np.asarray(c_ids, dtype=np.int32),
                np.asarray(c_indptr, dtype=np.int64),
                vocab_size,
            )
        )
    return workload


def run(impl, workload) -> tuple[float, list[np.ndarray]]:
    started = time.perf_counter()
    outputs = [impl.lexical_probs(*args) for args in workload]
    return time.perf_counter() - started, outputs


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--chunk-tokens", type=int, default=350)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    workload = build_workload(args.pairs, args.chunk_tokens, args.seed)
    pure_time, pure_out = run(pure, workload)
    print(f"pure python : {pure_time:8.3f}s for {args.pairs} pairs")
    if _native is None:
        print("compiled    : not built (install with the Cython extension to compare)")
        return 0
    native_time, native_out = run(_native, workload)
    print(f"compiled    : {native_time:8.3f}s for {args.pairs} pairs")
    print(f"speedup     : {pure_time / native_time:8.1f}x")
    for a, b in zip(pure_out, native_out):
        if not np.array_equal(a, b):
            print("MISMATCH: kernels disagree")
            return 1
    print("outputs     : bit-identical across implementations")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
