#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--pairs N]
"""

import argparse
import random
import time

import numpy as np

from phonocorrect import _kernels_py
from phonocorrect.phonetics import default_table

try:
    from phonocorrect import _kernels as compiled
except ImportError:
    compiled = None


def bench(label, fn, repeat=3):
    best = min(timeit_once(fn) for _ in range(repeat))
    print(f"  {label:<14} {best * 1000:8.1f} ms")
    return best


def timeit_once(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=2000)
    args = ap.parse_args()

    if compiled is None:
        print("compiled kernels not built; showing fallback only")

    rng = random.Random(0)
    table = default_table()
    chars = sorted(table.readings)

    sentences = [
        ("".join(rng.choice(chars) for _ in range(rng.randint(8, 30))),
         "".join(rng.choice(chars) for _ in range(rng.randint(8, 30))))
        for _ in range(args.pairs)
    ]
    char_pairs = [(rng.choice(chars), rng.choice(chars))
                  for _ in range(args.pairs * 5)]

    I = table._initial_arr
    F = table._final_arr
    T = table._tone_arr
    tone = table.tone_dist
    id_pairs = [(table.reading_ids(a), table.reading_ids(b))
                for a, b in char_pairs]

    print(f"levenshtein on {args.pairs} sentence pairs:")
    t_py = bench("python", lambda: [
        _kernels_py.levenshtein(a, b) for a, b in sentences])
    if compiled is not None:
        t_cy = bench("cython", lambda: [
            compiled.levenshtein(a, b) for a, b in sentences])
        print(f"  speedup        {t_py / t_cy:8.1f}x")

    print(f"char distance on {len(char_pairs)} character pairs:")
    t_py = bench("python", lambda: [
        _kernels_py.min_syllable_distance(I, F, T, tone, ia, ib)
        for ia, ib in id_pairs])
    if compiled is not None:
        t_cy = bench("cython", lambda: [
            compiled.min_syllable_distance(I, F, T, tone, ia, ib)
            for ia, ib in id_pairs])
        print(f"  speedup        {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
