"""Dense linear algebra over a prime field F_p.

Matrices are numpy ``int64`` arrays with entries in ``[0, p)``.  Over F_2 the
row operations use ``uint8`` XOR, which is several times faster.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"field characteristic must be prime, got {self.p!r}")
        # products of residues are accumulated in int64 matmuls
        if self.p >= 2**20:
            raise ValueError("field characteristic too large")


def reduce(a, p: int) -> np.ndarray:
    return np.mod(np.asarray(a, dtype=np.int64), p)


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` over F_p and its pivot columns."""
    if p == 2:
        m = (np.asarray(a, dtype=np.int64) & 1).astype(np.uint8)
    else:
        m = reduce(a, p).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        if p == 2:
            col = m[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                m[hit] ^= m[r]
        else:
            inv = pow(int(m[r, c]), -1, p)
            if inv != 1:
                m[r] = (m[r] * inv) % p
            col = m[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m.astype(np.int64), pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis of the right kernel of ``a``, as columns (shape ``cols x nullity``)."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0 or a.size == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-r[i, f]) % p
    return basis


def solve_full_column(a: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Solve ``a @ x = y`` where ``a`` has full column rank.

    Raises ``ValueError`` if some column of ``y`` is outside the column space.
    """
    a = np.asarray(a, dtype=np.int64)
    y = np.asarray(y, dtype=np.int64)
    n, k = a.shape
    if k == 0:
        if np.any(reduce(y, p)):
            raise ValueError("right-hand side not in the column space")
        return np.zeros((0, y.shape[1]), dtype=np.int64)
    r, pivots = rref(np.hstack([a, y]), p)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix does not have full column rank")
    if len(pivots) > k or np.any(r[k:, k:]):
        raise ValueError("right-hand side not in the column space")
    return r[:k, k:]


def matmul(a, b, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return (a @ b) % p
