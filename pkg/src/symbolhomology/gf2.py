"""Exact linear algebra over GF(2) and arithmetic in GF(2)[U].

Polynomials in U are Python ints used as bit masks: bit k is the coefficient
of U^k.  Addition is XOR, multiplication is carry-less.
"""

from __future__ import annotations

import numpy as np


def row_reduce(m: np.ndarray):
    """Reduced row echelon form over GF(2); returns (matrix, pivot columns)."""
    a = (np.array(m, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hit = np.nonzero(a[r:, c])[0]
        if hit.size == 0:
            continue
        p = r + hit[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        a[mask] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(row_reduce(m)[1])


def nullspace(m) -> np.ndarray:
    """Basis of {v : m v = 0} as rows."""
    m = np.asarray(m, dtype=np.uint8)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(cols, dtype=np.uint8)
    a, pivots = row_reduce(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = a[i, f]
        basis.append(v)
    if not basis:
        return np.zeros((0, cols), dtype=np.uint8)
    return np.array(basis, dtype=np.uint8)


def in_column_space(m, v) -> bool:
    m = np.asarray(m, dtype=np.uint8)
    v = np.asarray(v, dtype=np.uint8).reshape(-1, 1)
    if m.size == 0:
        return not v.any()
    return rank(m) == rank(np.hstack([m, v]))


def matmul(a, b) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64) % 2).astype(np.uint8)


def poly_mul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_str(p: int) -> str:
    if p == 0:
        return "0"
    bits = []
    for k in range(p.bit_length()):
        if p >> k & 1:
            bits.append("1" if k == 0 else ("U" if k == 1 else f"U^{k}"))
    return "+".join(bits)


def poly_matmul(a, b) -> np.ndarray:
    """Product of object arrays holding GF(2)[U] bit masks."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0
            for k in range(a.shape[1]):
                if a[i, k] and b[k, j]:
                    acc ^= poly_mul(int(a[i, k]), int(b[k, j]))
            out[i, j] = acc
    return out


def poly_zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def expand_u(m, degree_bound: int) -> np.ndarray:
    """GF(2) matrix of a GF(2)[U]-matrix acting on polynomials of degree <= bound.

    Entry degrees that push past the bound are kept (rows grow) so that the
    map is exact on its truncated domain.
    """
    m = np.asarray(m, dtype=object)
    rows, cols = m.shape
    top = max((int(x).bit_length() for x in m.flat), default=1)
    out_deg = degree_bound + max(top - 1, 0)
    big = np.zeros((rows * (out_deg + 1), cols * (degree_bound + 1)), dtype=np.uint8)
    for i in range(rows):
        for j in range(cols):
            p = int(m[i, j])
            for k in range(p.bit_length()):
                if p >> k & 1:
                    for d in range(degree_bound + 1):
                        big[i * (out_deg + 1) + d + k, j * (degree_bound + 1) + d] = 1
    return big
