# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; interchangeable with the _kernels_py module."""

from libc.math cimport sqrt, INFINITY
from libc.stdlib cimport malloc, free

IMPLEMENTATION = "cython"


def levenshtein(a, b):
    """Unit-cost edit distance between two sequences."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    cdef Py_ssize_t *prev = <Py_ssize_t *> malloc((lb + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t *cur = <Py_ssize_t *> malloc((lb + 1) * sizeof(Py_ssize_t))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    cdef Py_ssize_t i, j, cost, best
    cdef Py_ssize_t *tmp
    try:
        for j in range(lb + 1):
            prev[j] = j
        for i in range(1, la + 1):
            cur[0] = i
            ai = a[i - 1]
            for j in range(1, lb + 1):
                cost = 0 if ai == b[j - 1] else 1
                best = prev[j] + 1
                if cur[j - 1] + 1 < best:
                    best = cur[j - 1] + 1
                if prev[j - 1] + cost < best:
                    best = prev[j - 1] + cost
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        return prev[lb]
    finally:
        free(prev)
        free(cur)


def min_syllable_distance(double[:, ::1] initials, double[:, ::1] finals,
                          long[::1] tones, double[:, ::1] tone_dist,
                          long[::1] ids_a, long[::1] ids_b):
    """Minimum over reading pairs of initial+final+tone distance."""
    cdef double best = INFINITY, s, d, total
    cdef Py_ssize_t x, y, k
    cdef long ia, ib
    cdef Py_ssize_t dim_i = initials.shape[1], dim_f = finals.shape[1]
    for x in range(ids_a.shape[0]):
        ia = ids_a[x]
        for y in range(ids_b.shape[0]):
            ib = ids_b[y]
            if ia == ib:
                return 0.0
            s = 0.0
            for k in range(dim_i):
                d = initials[ia, k] - initials[ib, k]
                s += d * d
            total = sqrt(s)
            s = 0.0
            for k in range(dim_f):
                d = finals[ia, k] - finals[ib, k]
                s += d * d
            total += sqrt(s) + tone_dist[tones[ia], tones[ib]]
            if total < best:
                best = total
    return best
