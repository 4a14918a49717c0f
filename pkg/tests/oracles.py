"""Independent reference implementations used only by the tests.

These deliberately avoid the production code paths: the matrix exponential
is a scaling-and-squaring Taylor series (production uses eigendecomposition)
and the measure sums walk every bit-string in a plain Python loop
(production uses the enumeration kernels and log-domain binomials).
"""

import math

import numpy as np


def series_expm(matrix: np.ndarray, terms: int = 30) -> np.ndarray:
    """exp(matrix) by scaling and squaring with a truncated Taylor series."""
    mat = np.asarray(matrix, dtype=np.complex128)
    norm = np.linalg.norm(mat, ord=np.inf)
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    scaled = mat / (2**squarings)
    result = np.eye(mat.shape[0], dtype=np.complex128)
    term = np.eye(mat.shape[0], dtype=np.complex128)
    for k in range(1, terms + 1):
        term = term @ scaled / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


def brute_force_measure_sums(preps, epsilon: float):
    """Counting and Born maverick measures by a literal loop over bit-strings.

    preps is a list of SpinPreparation; the criterion frequency is the mean
    plus probability, and a bit-string is typical when its plus frequency is
    within epsilon of it (closed interval).
    """
    n = len(preps)
    p = math.fsum(q.p for q in preps) / n
    maverick_count = 0
    maverick_weights = []
    typical_weights = []
    for m in range(1 << n):
        bits = format(m, f"0{n}b")
        k = bits.count("0")
        weight = 1.0
        for i, b in enumerate(bits):
            weight *= preps[i].p if b == "0" else 1.0 - preps[i].p
        if abs(k / n - p) <= epsilon:
            typical_weights.append(weight)
        else:
            maverick_count += 1
            maverick_weights.append(weight)
    return {
        "counting_maverick_fraction": maverick_count / (1 << n),
        "born_maverick_weight": math.fsum(maverick_weights),
        "born_typical_weight": math.fsum(typical_weights),
        "typical_branch_count": (1 << n) - maverick_count,
    }
