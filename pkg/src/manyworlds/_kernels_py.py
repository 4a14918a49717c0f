"""Pure numpy implementations of the branch enumeration kernels.

Same contract as the compiled extension in ``_kernels.pyx``: every outcome
bit-string in [0, 2**n) is visited, bucketed by its number of plus outcomes
(zero bits, spin i at bit position n-1-i). Work is chunked so peak memory
stays bounded; chunk order is fixed, so results are deterministic.
"""

import numpy as np

_CHUNK = 1 << 20


def plus_count_histogram(n):
    """Count the bit-strings of length n by number of plus (zero) bits.

    Returns a uint64 array h of length n+1 with h[k] = number of outcome
    bit-strings having exactly k plus results. Enumerates all 2**n indices.
    """
    if n < 0 or n > 62:
        raise ValueError(f"bit-string length must be in [0, 62], got {n}")
    hist = np.zeros(n + 1, dtype=np.uint64)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        k = (n - np.bitwise_count(idx)).astype(np.intp)
        hist += np.bincount(k, minlength=n + 1).astype(np.uint64)
    return hist


def weighted_plus_count_histogram(plus_probs):
    """Accumulate per-branch product weights, bucketed by plus count.

    plus_probs[i] is the probability that spin i lands plus; a branch's
    weight is the product over spins of plus_probs[i] or 1 - plus_probs[i]
    according to its bits. Returns a float64 array of length n+1.
    """
    probs = np.ascontiguousarray(plus_probs, dtype=np.float64)
    if probs.ndim != 1:
        raise ValueError("plus_probs must be one-dimensional")
    n = probs.shape[0]
    if n > 62:
        raise ValueError(f"bit-string length must be in [0, 62], got {n}")
    if np.any((probs < 0.0) | (probs > 1.0)):
        raise ValueError("plus_probs entries must lie in [0, 1]")
    minus = 1.0 - probs
    hist = np.zeros(n + 1, dtype=np.float64)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        k = (n - np.bitwise_count(idx)).astype(np.intp)
        w = np.ones(idx.shape[0], dtype=np.float64)
        for i in range(n):
            bit = (idx >> np.uint64(n - 1 - i)) & np.uint64(1)
            w *= np.where(bit == 1, minus[i], probs[i])
        hist += np.bincount(k, weights=w, minlength=n + 1)
    return hist
