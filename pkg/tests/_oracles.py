"""Independent reference computations used by the tests.

These deliberately avoid the library's complex-embedding fast path: matrix
products are accumulated entry by entry with the scalar Quaternion class.
"""

import numpy as np

from biquot.liealg import mat_from_quaternions, to_quaternion_entries
from biquot.quat import Quaternion


def scalar_mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    qa = to_quaternion_entries(np.asarray(a, dtype=float))
    qb = to_quaternion_entries(np.asarray(b, dtype=float))
    n = len(qa)
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = Quaternion()
            for k in range(n):
                acc = acc + qa[r][k] * qb[k][c]
            row.append(acc)
        rows.append(row)
    return mat_from_quaternions(rows)


def scalar_bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return scalar_mat_mul(a, b) - scalar_mat_mul(b, a)


def scalar_g0(a: np.ndarray, b: np.ndarray) -> float:
    prod = to_quaternion_entries(scalar_mat_mul(a, b))
    return -sum(prod[d][d].re for d in range(len(prod)))
