# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled branch enumeration kernels.

Single C loops over all 2**n outcome bit-strings; see ``_kernels_py`` for
the contract and the fallback used when this extension is unavailable.
"""

import numpy as np

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #  define MW_POPCOUNT64(x) __builtin_popcountll(x)
    #else
    static int MW_POPCOUNT64(unsigned long long v) {
        int c = 0;
        while (v) { v &= v - 1; c++; }
        return c;
    }
    #endif
    """
    int MW_POPCOUNT64(unsigned long long x) nogil


def plus_count_histogram(n):
    """Count the bit-strings of length n by number of plus (zero) bits."""
    cdef int cn = n
    if cn < 0 or cn > 62:
        raise ValueError(f"bit-string length must be in [0, 62], got {n}")
    hist = np.zeros(cn + 1, dtype=np.uint64)
    cdef unsigned long long[::1] h = hist
    cdef unsigned long long total = 1ULL << cn
    cdef unsigned long long m
    with nogil:
        for m in range(total):
            h[cn - MW_POPCOUNT64(m)] += 1
    return hist


def weighted_plus_count_histogram(plus_probs):
    """Accumulate per-branch product weights, bucketed by plus count.

    Per-bucket Kahan compensation keeps the fixed-order sums accurate over
    the full 2**n enumeration.
    """
    probs = np.ascontiguousarray(plus_probs, dtype=np.float64)
    if probs.ndim != 1:
        raise ValueError("plus_probs must be one-dimensional")
    cdef int cn = probs.shape[0]
    if cn > 62:
        raise ValueError(f"bit-string length must be in [0, 62], got {cn}")
    if np.any((probs < 0.0) | (probs > 1.0)):
        raise ValueError("plus_probs entries must lie in [0, 1]")
    minus = 1.0 - probs
    hist = np.zeros(cn + 1, dtype=np.float64)
    comp = np.zeros(cn + 1, dtype=np.float64)
    cdef double[::1] pp = probs
    cdef double[::1] qq = minus
    cdef double[::1] h = hist
    cdef double[::1] c = comp
    cdef unsigned long long total = 1ULL << cn
    cdef unsigned long long m
    cdef int i, k
    cdef double w, y, t
    with nogil:
        for m in range(total):
            w = 1.0
            k = 0
            for i in range(cn):
                if (m >> (cn - 1 - i)) & 1ULL:
                    w *= qq[i]
                else:
                    w *= pp[i]
                    k += 1
            y = w - c[k]
            t = h[k] + y
            c[k] = (t - h[k]) - y
            h[k] = t
    return hist
