"""Persistence modules over a finite grid, barcodes and bottleneck distance.

The complexes of a filtration here are not nested, so barcodes are read off
the rank invariant of the consecutive structure matrices instead of a global
boundary-matrix reduction.  Index interval ``[i, j]`` becomes the half-open
real interval ``[t_i, t_{j+1})`` (``t_{m+1} = inf``).
"""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import fields as ff
from .errors import NegativeMultiplicity, RelationInclusionFails, SizeMismatch


@dataclass(frozen=True, eq=False)
class PersistenceModule:
    grid: np.ndarray
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...]  # maps[i]: index i -> i + 1
    p: int = 2

    def __post_init__(self):
        if len(self.grid) != len(self.dims) or len(self.maps) != max(len(self.dims) - 1, 0):
            raise SizeMismatch("grid, dims and maps lengths disagree")
        for i, m in enumerate(self.maps):
            if m.shape != (self.dims[i + 1], self.dims[i]):
                raise SizeMismatch(f"map {i} has shape {m.shape}, expected {(self.dims[i + 1], self.dims[i])}")

    @property
    def m(self) -> int:
        """Index of the last grid value."""
        return len(self.dims) - 1

    def composite(self, i: int, j: int) -> np.ndarray:
        out = np.eye(self.dims[i], dtype=np.int64)
        for k in range(i, j):
            out = ff.matmul(self.maps[k], out, self.p)
        return out


@dataclass(frozen=True, eq=False)
class RankFunction:
    """Ranks ``r(i, j)`` of all composites ``i -> j``.

    Runs of consecutive isomorphisms are collapsed into blocks first; a
    composite's rank only depends on the blocks of its endpoints, so the
    table is stored per block.
    """

    dims: tuple[int, ...]
    block_of: np.ndarray
    starts: np.ndarray
    ends: np.ndarray
    table: np.ndarray  # table[a, b] = r over blocks, for a <= b

    def __call__(self, i: int, j: int) -> int:
        if i > j:
            raise ValueError("rank is defined for i <= j only")
        return int(self.table[self.block_of[i], self.block_of[j]])

    @property
    def m(self) -> int:
        return len(self.dims) - 1

    def full(self) -> np.ndarray:
        """Dense ``(m+1, m+1)`` table, zero below the diagonal."""
        b = self.block_of
        out = self.table[np.ix_(b, b)]
        return np.triu(out)


def rank_function(M: PersistenceModule) -> RankFunction:
    p = M.p
    n = len(M.dims)
    if n == 0:
        z = np.zeros(0, dtype=int)
        return RankFunction((), z, z, z, np.zeros((0, 0), dtype=int))
    iso = [M.dims[i] == M.dims[i + 1] and ff.rank(M.maps[i], p) == M.dims[i] for i in range(n - 1)]
    block_of = np.zeros(n, dtype=int)
    for i in range(1, n):
        block_of[i] = block_of[i - 1] + (0 if iso[i - 1] else 1)
    nb = int(block_of[-1]) + 1
    starts = np.array([int(np.flatnonzero(block_of == b)[0]) for b in range(nb)])
    ends = np.array([int(np.flatnonzero(block_of == b)[-1]) for b in range(nb)])
    # block b -> b+1 composite, taken between block ends
    hops = [M.composite(int(ends[b]), int(ends[b + 1])) for b in range(nb - 1)]
    table = np.zeros((nb, nb), dtype=int)
    for a in range(nb):
        table[a, a] = M.dims[ends[a]]
        prod = np.eye(M.dims[ends[a]], dtype=np.int64)
        for b in range(a + 1, nb):
            prod = ff.matmul(hops[b - 1], prod, p)
            r = ff.rank(prod, p)
            table[a, b] = r
            if r == 0:
                break
    return RankFunction(tuple(M.dims), block_of, starts, ends, table)


def interval_multiplicities(R: RankFunction) -> dict[tuple[int, int], int]:
    """Inclusion-exclusion on the rank invariant; returns ``{(i, j): mult}``."""
    t = R.table
    nb = t.shape[0]
    padded = np.zeros((nb + 1, nb + 1), dtype=int)
    padded[1:, :nb] = np.triu(t)   # padded[a+1, b] = r(a, b); row 0 is r(-1, .)
    out = {}
    for a in range(nb):
        for b in range(a, nb):
            mu = padded[a + 1, b] - padded[a, b] - padded[a + 1, b + 1] + padded[a, b + 1]
            if mu < 0:
                raise NegativeMultiplicity(f"interval over blocks [{a}, {b}] has multiplicity {mu}")
            if mu:
                out[(int(R.starts[a]), int(R.ends[b]))] = int(mu)
    return out


def reconstruction_holds(R: RankFunction, intervals: dict[tuple[int, int], int]) -> bool:
    """Check that summing multiplicities of intervals containing ``[i, j]`` gives ``r(i, j)``."""
    size = len(R.dims)
    mu = np.zeros((size, size), dtype=int)
    for (i, j), k in intervals.items():
        mu[i, j] += k
    # covered[i, j] = sum of mu[i', j'] over i' <= i, j' >= j
    covered = np.cumsum(np.cumsum(mu[:, ::-1], axis=1)[:, ::-1], axis=0)
    full = R.full()
    upper = np.triu(np.ones((size, size), dtype=bool))
    return bool(np.array_equal(covered[upper], full[upper]))


# --- diagrams --------------------------------------------------------------

@dataclass(frozen=True)
class PersistenceDiagram:
    """Per degree, sorted ``(birth, death, mult)`` triples; ``death`` may be ``inf``."""

    points: dict
    p: int = 2

    def degree(self, n: int) -> tuple[tuple[float, float, int], ...]:
        return self.points.get(n, ())

    def expanded(self, n: int) -> list[tuple[float, float]]:
        return [(b, d) for b, d, k in self.degree(n) for _ in range(k)]

    @property
    def degrees(self) -> list[int]:
        return sorted(self.points)

    def to_json(self) -> str:
        doc = {
            "field": self.p,
            "diagrams": {
                str(n): [{"birth": b, "death": None if math.isinf(d) else d, "mult": k} for b, d, k in self.points[n]]
                for n in self.degrees
            },
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PersistenceDiagram":
        doc = json.loads(text)
        pts = {
            int(n): tuple((float(q["birth"]), math.inf if q["death"] is None else float(q["death"]), int(q["mult"]))
                          for q in lst)
            for n, lst in doc["diagrams"].items()
        }
        return cls(pts, int(doc["field"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "birth", "death", "mult"])
        for n in self.degrees:
            for b, d, k in self.points[n]:
                w.writerow([n, repr(b), "inf" if math.isinf(d) else repr(d), k])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, p: int = 2) -> "PersistenceDiagram":
        pts: dict[int, list] = {}
        for row in csv.DictReader(io.StringIO(text)):
            pts.setdefault(int(row["degree"]), []).append(
                (float(row["birth"]), float(row["death"]), int(row["mult"])))
        return cls({n: tuple(v) for n, v in pts.items()}, p)


def to_diagram(intervals: dict[tuple[int, int], int], grid: Sequence[float]) -> tuple[tuple[float, float, int], ...]:
    """Real-valued points for one degree."""
    m = len(grid) - 1
    c: Counter = Counter()
    for (i, j), k in intervals.items():
        death = math.inf if j == m else float(grid[j + 1])
        c[(float(grid[i]), death)] += k
    return tuple((b, d, k) for (b, d), k in sorted(c.items()))


def module_diagram(M: PersistenceModule) -> tuple[tuple[float, float, int], ...]:
    return to_diagram(interval_multiplicities(rank_function(M)), M.grid)


# --- bottleneck ------------------------------------------------------------

def _linf(a, b) -> float:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _feasible(A, B, half_a, half_b, cost, delta) -> bool:
    na, nb = len(A), len(B)
    n = na + nb
    rows, cols = [], []
    for i in range(na):
        for j in range(nb):
            if cost[i, j] <= delta:
                rows.append(i); cols.append(j)
        if half_a[i] <= delta:
            rows.append(i); cols.append(nb + i)
    for j in range(nb):
        if half_b[j] <= delta:
            rows.append(na + j); cols.append(j)
        for i in range(na):
            rows.append(na + j); cols.append(nb + i)
    g = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    match = maximum_bipartite_matching(g, perm_type="column")
    return bool(np.all(match >= 0))


def _finite_bottleneck(A: list, B: list) -> float:
    if not A and not B:
        return 0.0
    half_a = np.array([(d - b) / 2 for b, d in A])
    half_b = np.array([(d - b) / 2 for b, d in B])
    cost = np.array([[_linf(a, b) for b in B] for a in A]).reshape(len(A), len(B))
    if not A or not B:
        return float(max(half_a.max(initial=0.0), half_b.max(initial=0.0)))
    cands = np.unique(np.concatenate([cost.ravel(), half_a, half_b]))
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(A, B, half_a, half_b, cost, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def bottleneck(A: PersistenceDiagram, B: PersistenceDiagram, degree: int) -> float:
    pa, pb = A.expanded(degree), B.expanded(degree)
    inf_a = sorted(b for b, d in pa if math.isinf(d))
    inf_b = sorted(b for b, d in pb if math.isinf(d))
    if len(inf_a) != len(inf_b):
        return math.inf
    # sorted pairing is optimal for the max-difference matching on a line
    inf_part = max((abs(x - y) for x, y in zip(inf_a, inf_b)), default=0.0)
    fin = _finite_bottleneck([q for q in pa if not math.isinf(q[1])], [q for q in pb if not math.isinf(q[1])])
    return max(inf_part, fin)


# --- interleaving witness --------------------------------------------------

@dataclass
class InterleavingReport:
    delta: float
    ok: bool
    squares_checked: int = 0
    levels: int = 0
    violation: str | None = None

    def __bool__(self):
        return self.ok


def _stage_at(stages, level: float, tol: float):
    grid = [s.t for s in stages]
    i = int(np.searchsorted(grid, level + tol, side="right")) - 1
    return stages[max(i, 0)]


def interleaving_witness(stages_a, stages_b, delta: float, tol: float = 1e-9) -> InterleavingReport:
    """Verify a ``delta``-interleaving between two stage sequences on the same points.

    Cross maps at level ``s`` are the identity on points, from the stage of
    one filtration at ``s`` to the stage of the other at ``s + delta``.  All
    naturality squares and both triangle identities are checked on homology
    at every level where either side can change.  Raises
    :class:`RelationInclusionFails` when some cross map does not exist.
    """
    from .pipeline import stage_map

    cache: dict = {}

    def hmap(src, dst):
        key = (id(src), id(dst))
        if key not in cache:
            cache[key] = stage_map(src, dst)
        return cache[key]

    ga = [s.t for s in stages_a]
    gb = [s.t for s in stages_b]
    levels = sorted({round(v, 12) for g in (ga, gb) for v in g for v in (v, v - delta, v - 2 * delta) if v >= 0} | {0.0})
    report = InterleavingReport(delta, True, 0, len(levels))
    p = stages_a[0].homology.field.p

    def inclusion(src, dst, what):
        if np.any(src.preorder.rel & ~dst.preorder.rel):
            raise RelationInclusionFails(f"{what}: relation at t={src.t!r} not contained in relation at t={dst.t!r}")

    def same(x, y, where):
        if report.ok:
            report.squares_checked += 1
            for n, (u, v) in enumerate(zip(x, y)):
                if not np.array_equal(u % p, v % p):
                    report.ok = False
                    report.violation = f"{where}, degree {n}"
                    return

    def mul(f, g):
        return [ff.matmul(a, b, p) for a, b in zip(f, g)]

    for s in levels:
        A0, B0 = _stage_at(stages_a, s, tol), _stage_at(stages_b, s, tol)
        A1, B1 = _stage_at(stages_a, s + delta, tol), _stage_at(stages_b, s + delta, tol)
        A2, B2 = _stage_at(stages_a, s + 2 * delta, tol), _stage_at(stages_b, s + 2 * delta, tol)
        inclusion(A0, B1, "A->B")
        inclusion(B0, A1, "B->A")
        same(mul(hmap(B1, A2), hmap(A0, B1)), hmap(A0, A2), f"triangle A at s={s!r}")
        same(mul(hmap(A1, B2), hmap(B0, A1)), hmap(B0, B2), f"triangle B at s={s!r}")
    for s, s2 in zip(levels, levels[1:]):
        A0, A0n = _stage_at(stages_a, s, tol), _stage_at(stages_a, s2, tol)
        B0, B0n = _stage_at(stages_b, s, tol), _stage_at(stages_b, s2, tol)
        A1, A1n = _stage_at(stages_a, s + delta, tol), _stage_at(stages_a, s2 + delta, tol)
        B1, B1n = _stage_at(stages_b, s + delta, tol), _stage_at(stages_b, s2 + delta, tol)
        same(mul(hmap(A0n, B1n), hmap(A0, A0n)), mul(hmap(B1, B1n), hmap(A0, B1)), f"naturality A->B at s={s!r}")
        same(mul(hmap(B0n, A1n), hmap(B0, B0n)), mul(hmap(A1, A1n), hmap(B0, A1)), f"naturality B->A at s={s!r}")
    return report
