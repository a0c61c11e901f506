"""Pure-Python kernels; interchangeable with the compiled _kernels module."""

import math

IMPLEMENTATION = "python"


def levenshtein(a, b) -> int:
    """Unit-cost edit distance between two sequences."""
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur[0] = i
        ai = a[i - 1]
        for j in range(1, lb + 1):
            cost = 0 if ai == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev, cur = cur, prev
    return prev[lb]


def min_syllable_distance(initials, finals, tones, tone_dist,
                          ids_a, ids_b) -> float:
    """Minimum over reading pairs of initial+final+tone distance.

    initials/finals: (n_syllables, dim) coordinate arrays; tones: syllable
    tone indices; tone_dist: tone matrix; ids_a/ids_b: reading ids of the
    two characters.
    """
    best = math.inf
    dim_i = initials.shape[1]
    dim_f = finals.shape[1]
    for ia in ids_a:
        for ib in ids_b:
            if ia == ib:
                return 0.0
            s = 0.0
            for k in range(dim_i):
                d = initials[ia, k] - initials[ib, k]
                s += d * d
            total = math.sqrt(s)
            s = 0.0
            for k in range(dim_f):
                d = finals[ia, k] - finals[ib, k]
                s += d * d
            total += math.sqrt(s) + tone_dist[tones[ia], tones[ib]]
            if total < best:
                best = total
    return best
