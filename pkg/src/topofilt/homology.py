"""Simplicial homology over F_p, induced maps, and a naive Betti oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields as ff
from .complexes import SimplicialComplex, SimplicialVertexMap
from .errors import ChainMapNotCommuting, OracleCapExceeded
from .fields import FieldSpec

ORACLE_CAP = 2**12


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """``boundary[n]`` maps n-chains to (n-1)-chains, shape ``(|C_{n-1}|, |C_n|)``.

    Defined for ``0 <= n <= dim + 1``; ``boundary[0]`` has no rows and
    ``boundary[dim + 1]`` no columns.
    """

    complex: SimplicialComplex
    field: FieldSpec
    boundary: tuple[np.ndarray, ...]

    def d(self, n: int) -> np.ndarray:
        if 0 <= n < len(self.boundary):
            return self.boundary[n]
        rows = len(self.complex.simplices(n - 1))
        cols = len(self.complex.simplices(n))
        return np.zeros((rows, cols), dtype=np.int64)

    def size(self, n: int) -> int:
        return len(self.complex.simplices(n))


def build_chain_complex(K: SimplicialComplex, field: FieldSpec = FieldSpec()) -> ChainComplex:
    p = field.p
    mats = [np.zeros((0, len(K.simplices(0))), dtype=np.int64)]
    for n in range(1, K.dimension + 2):
        faces = K.index(n - 1)
        cells = K.simplices(n)
        d = np.zeros((len(faces), len(cells)), dtype=np.int64)
        for j, s in enumerate(cells):
            for i in range(n + 1):
                d[faces[s[:i] + s[i + 1:]], j] = 1 if i % 2 == 0 else p - 1
        mats.append(d)
    for n in range(1, len(mats)):
        if mats[n - 1].size and mats[n].size and np.any(ff.matmul(mats[n - 1], mats[n], p)):
            raise ChainMapNotCommuting(f"boundary squared is nonzero in degree {n}")
    return ChainComplex(K, field, tuple(mats))


@dataclass(frozen=True, eq=False)
class HomologyBasis:
    """Cycle representatives per degree, plus what is needed to express any
    cycle in terms of them modulo boundaries."""

    chain: ChainComplex
    max_dim: int
    betti: tuple[int, ...]
    reps: tuple[np.ndarray, ...]       # (|C_n|, betti_n)
    _solve: tuple[np.ndarray, ...]     # [independent boundaries | reps]

    @property
    def field(self) -> FieldSpec:
        return self.chain.field

    def coordinates(self, n: int, cycles: np.ndarray) -> np.ndarray:
        """Coefficients of ``cycles`` (columns) in the degree-``n`` basis."""
        b = self.betti[n]
        if b == 0:
            return np.zeros((0, cycles.shape[1]), dtype=np.int64)
        try:
            x = ff.solve_full_column(self._solve[n], cycles, self.field.p)
        except ValueError:
            raise ChainMapNotCommuting(f"image in degree {n} is not a cycle") from None
        return x[x.shape[0] - b:]


def homology_basis(C: ChainComplex, max_dim: int) -> HomologyBasis:
    p = C.field.p
    betti, reps, solve = [], [], []
    for n in range(max_dim + 1):
        size = C.size(n)
        if size == 0:
            betti.append(0)
            reps.append(np.zeros((0, 0), dtype=np.int64))
            solve.append(np.zeros((0, 0), dtype=np.int64))
            continue
        z = ff.nullspace(C.d(n), p)
        b = C.d(n + 1)
        nb = b.shape[1]
        if z.shape[1] == 0:
            betti.append(0)
            reps.append(np.zeros((size, 0), dtype=np.int64))
            solve.append(np.zeros((size, 0), dtype=np.int64))
            continue
        _, piv = ff.rref(np.hstack([b, z]), p)
        bcols = [c for c in piv if c < nb]
        zcols = [c - nb for c in piv if c >= nb]
        h = z[:, zcols]
        betti.append(len(zcols))
        reps.append(h)
        solve.append(np.hstack([b[:, bcols], h]))
    return HomologyBasis(C, max_dim, tuple(betti), tuple(reps), tuple(solve))


def _perm_sign(seq) -> int:
    """Sign of the permutation sorting ``seq`` (distinct entries)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def chain_map_matrix(f: SimplicialVertexMap, n: int, p: int) -> np.ndarray:
    src = f.source.simplices(n)
    tgt = f.target.index(n)
    m = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for j, s in enumerate(src):
        img = [f.vertex_map[v] for v in s]
        if len(set(img)) < len(img):
            continue
        m[tgt[tuple(sorted(img))], j] = _perm_sign(img) % p
    return m


@dataclass(frozen=True)
class InducedMatrix:
    matrices: tuple[np.ndarray, ...]  # degree n: (betti_n(dst), betti_n(src))

    def __getitem__(self, n: int) -> np.ndarray:
        return self.matrices[n]

    def __len__(self) -> int:
        return len(self.matrices)


def induced_matrix(f: SimplicialVertexMap, src: HomologyBasis, dst: HomologyBasis,
                   field: FieldSpec | None = None, check: bool = True) -> InducedMatrix:
    p = (field or src.field).p
    top = min(src.max_dim, dst.max_dim)
    maps = {n: chain_map_matrix(f, n, p) for n in range(top + 2 if check else top + 1)}
    if check:
        for n in range(1, top + 2):
            lhs = ff.matmul(dst.chain.d(n), maps[n], p)
            rhs = ff.matmul(maps[n - 1], src.chain.d(n), p)
            if not np.array_equal(lhs, rhs):
                raise ChainMapNotCommuting(f"chain map does not commute with the boundary in degree {n}")
    out = []
    for n in range(top + 1):
        if src.betti[n] == 0 or dst.betti[n] == 0:
            out.append(np.zeros((dst.betti[n], src.betti[n]), dtype=np.int64))
            continue
        img = ff.matmul(maps[n], src.reps[n], p)
        out.append(dst.coordinates(n, img))
    return InducedMatrix(tuple(out))


def homology(K: SimplicialComplex, field: FieldSpec = FieldSpec(), max_dim: int | None = None) -> HomologyBasis:
    max_dim = K.dimension if max_dim is None else max_dim
    return homology_basis(build_chain_complex(K, field), max_dim)


# --- independent oracle ----------------------------------------------------

def _naive_rank(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [(v * inv) % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                k = rows[i][c]
                rows[i] = [(a - k * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def naive_betti_oracle(K: SimplicialComplex, field: FieldSpec = FieldSpec()) -> list[int]:
    """Betti numbers by plain dense elimination on freshly built boundary matrices."""
    total = sum(1 for _ in K)
    if total > ORACLE_CAP:
        raise OracleCapExceeded(f"{total} simplices exceeds oracle cap {ORACLE_CAP}")
    p = field.p
    simplices = sorted(K, key=lambda s: (len(s), s))
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(s)
    top = max(by_dim) if by_dim else -1
    ranks = {}
    for n in range(1, top + 1):
        lower = by_dim[n - 1]
        rows = [[0] * len(by_dim[n]) for _ in lower]
        for j, s in enumerate(by_dim[n]):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                rows[lower.index(face)][j] = (-1) ** i % p
        ranks[n] = _naive_rank(rows, p)
    return [len(by_dim[n]) - ranks.get(n, 0) - ranks.get(n + 1, 0) for n in range(top + 1)]
