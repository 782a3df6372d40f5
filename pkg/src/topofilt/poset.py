"""Finite posets, beat-point cores and maximal-element crosscuts.

Beat points follow the usual finite-space convention: ``x`` is a *down* beat
point when its strict down-set has a maximum, an *up* beat point when its
strict up-set has a minimum.  Removing one and sending it to that
maximum/minimum (its dominator) is a strong deformation retraction, so cores
have the homotopy type of the original poset.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyPoset, NotMonotone, UnsupportedCrosscut, ValidationError

DEFAULT_SUBSET_CAP = 2**20


def _frozen_bool(a) -> np.ndarray:
    a = np.array(a, dtype=bool)
    a.setflags(write=False)
    return a


def _bool_square(a: np.ndarray) -> np.ndarray:
    ai = a.astype(np.int32)
    return (ai @ ai) > 0


@dataclass(frozen=True, eq=False)
class Poset:
    leq: np.ndarray
    element_tags: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        leq = _frozen_bool(self.leq)
        object.__setattr__(self, "leq", leq)
        m = leq.shape[0]
        if leq.shape != (m, m):
            raise ValidationError("order matrix must be square")
        if not leq.diagonal().all():
            raise ValidationError("order is not reflexive")
        if np.any(leq & leq.T & ~np.eye(m, dtype=bool)):
            raise ValidationError("order is not antisymmetric")
        if m and np.any(_bool_square(leq) & ~leq):
            raise ValidationError("order is not transitive")
        if self.element_tags is None:
            object.__setattr__(self, "element_tags", tuple((i,) for i in range(m)))
        elif len(self.element_tags) != m:
            raise ValidationError("one tag per element required")

    @property
    def m(self) -> int:
        return self.leq.shape[0]

    @property
    def lt(self) -> np.ndarray:
        return self.leq & ~np.eye(self.m, dtype=bool)

    def __eq__(self, other):
        return isinstance(other, Poset) and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash(self.leq.tobytes())

    @classmethod
    def from_relations(cls, m: int, pairs: Sequence[tuple[int, int]], tags=None) -> "Poset":
        """Poset generated by ``a <= b`` for each ``(a, b)`` in ``pairs``."""
        r = np.eye(m, dtype=bool)
        for a, b in pairs:
            r[a, b] = True
        while True:
            nxt = r | _bool_square(r)
            if np.array_equal(nxt, r):
                break
            r = nxt
        return cls(r, tags)

    def subposet(self, keep: Sequence[int]) -> "Poset":
        keep = list(keep)
        return Poset(self.leq[np.ix_(keep, keep)], tuple(self.element_tags[i] for i in keep))

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover relations ``(x, y)`` with ``x < y`` and nothing strictly between."""
        lt = self.lt
        covers = lt & ~_bool_square(lt)
        return [(int(a), int(b)) for a, b in np.argwhere(covers)]


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    source: Poset
    target: Poset
    f: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(v) for v in self.f)
        object.__setattr__(self, "f", f)
        if len(f) != self.source.m or any(not 0 <= v < self.target.m for v in f):
            raise NotMonotone("vertex assignment does not match source/target sizes")

    def check(self) -> "MonotoneMap":
        idx = np.asarray(self.f, dtype=int)
        if self.source.m and np.any(self.source.leq & ~self.target.leq[np.ix_(idx, idx)]):
            raise NotMonotone("map does not preserve the order")
        return self

    def __call__(self, x: int) -> int:
        return self.f[x]

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap) and self.f == other.f
                and self.source == other.source and self.target == other.target)


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """``g`` after ``f``."""
    return MonotoneMap(f.source, g.target, tuple(g.f[v] for v in f.f))


def identity_map(P: Poset) -> MonotoneMap:
    return MonotoneMap(P, P, tuple(range(P.m)))


@dataclass(frozen=True, eq=False)
class CoreResult:
    core: Poset
    inclusion: MonotoneMap
    retraction: MonotoneMap
    removal_log: tuple[tuple[int, str, int], ...] = field(default=())


def _beat_table(leq: np.ndarray):
    """Per element: (down dominator or -1, up dominator or -1)."""
    m = leq.shape[0]
    lt = leq & ~np.eye(m, dtype=bool)
    lti = lt.astype(np.int32)
    leqi = leq.astype(np.int32)
    # below[x, y] = #{z : z < x and z <= y}
    below = lti.T @ leqi
    down_size = lti.sum(axis=0)
    is_down = lt.T & (below == down_size[:, None])
    # above[x, y] = #{z : x < z and y <= z}
    above = lti @ leqi.T
    up_size = lti.sum(axis=1)
    is_up = lt & (above == up_size[:, None])
    down = np.where(is_down.any(axis=1), is_down.argmax(axis=1), -1)
    up = np.where(is_up.any(axis=1), is_up.argmax(axis=1), -1)
    return down, up


def beat_points(P: Poset) -> list[tuple[int, str, int]]:
    """All beat points as ``(element, kind, dominator)``.

    An element that is both kinds is reported once, as ``"down"``.
    """
    down, up = _beat_table(P.leq)
    out = []
    for x in range(P.m):
        if down[x] >= 0:
            out.append((x, "down", int(down[x])))
        elif up[x] >= 0:
            out.append((x, "up", int(up[x])))
    return out


def core(P: Poset) -> CoreResult:
    """Remove beat points one at a time, lowest index first, until none remain."""
    alive = list(range(P.m))
    to = list(range(P.m))
    log = []
    while len(alive) > 1:
        sub = P.leq[np.ix_(alive, alive)]
        down, up = _beat_table(sub)
        hit = np.flatnonzero((down >= 0) | (up >= 0))
        if hit.size == 0:
            break
        i = int(hit[0])
        kind, dom = ("down", int(down[i])) if down[i] >= 0 else ("up", int(up[i]))
        x, y = alive[i], alive[dom]
        log.append((x, kind, y))
        to = [y if v == x else v for v in to]
        del alive[i]
    C = P.subposet(alive)
    pos = {v: i for i, v in enumerate(alive)}
    inclusion = MonotoneMap(C, P, tuple(alive))
    retraction = MonotoneMap(P, C, tuple(pos[v] for v in to))
    return CoreResult(C, inclusion, retraction, tuple(log))


def trivial_core(P: Poset) -> CoreResult:
    """The identity 'reduction', for running without beat-point removal."""
    ident = identity_map(P)
    return CoreResult(P, ident, ident, ())


def conjugate_map(f: MonotoneMap, cp: CoreResult, cq: CoreResult) -> MonotoneMap:
    """``cq.retraction`` after ``f`` after ``cp.inclusion``, between the cores."""
    f.check()
    g = compose(cq.retraction, compose(f, cp.inclusion))
    return g.check()


@dataclass(frozen=True)
class Crosscut:
    elements: tuple[int, ...]


def maximal_elements(P: Poset) -> Crosscut:
    if P.m == 0:
        raise EmptyPoset("poset has no elements")
    has_above = P.lt.any(axis=1)
    return Crosscut(tuple(int(x) for x in np.flatnonzero(~has_above)))


@dataclass(frozen=True)
class CrosscutCheck:
    """``valid`` is True, False, or None when the subset cap was hit."""

    valid: bool | None
    certificate: tuple[int, ...] | None = None
    checked: int = 0

    def __bool__(self):
        return bool(self.valid)


def crosscut_generators(P: Poset, C: Crosscut) -> list[tuple[int, ...]]:
    """Distinct sets ``M(p) = {c in C : p <= c}``, maximal ones only, in order of first appearance."""
    cols = list(C.elements)
    gens: list[frozenset] = []
    for p in range(P.m):
        g = frozenset(c for c in cols if P.leq[p, c])
        if g and g not in gens:
            gens.append(g)
    maximal = [g for g in gens if not any(g < h for h in gens)]
    return [tuple(sorted(g)) for g in maximal]


def crosscut_valid(P: Poset, C: Crosscut, cap: int = DEFAULT_SUBSET_CAP) -> CrosscutCheck:
    """Check that every multi-element face of the crosscut complex has a meet."""
    if P.m == 0 or C != maximal_elements(P):
        raise UnsupportedCrosscut("only the maximal-element crosscut is supported")
    gens = crosscut_generators(P, C)
    budget = sum(2 ** len(g) - len(g) - 1 for g in gens)
    if budget > cap:
        return CrosscutCheck(None, None, 0)
    leq = P.leq
    seen: set[tuple[int, ...]] = set()
    checked = 0
    for g in gens:
        for size in range(2, len(g) + 1):
            for A in itertools.combinations(g, size):
                if A in seen:
                    continue
                seen.add(A)
                checked += 1
                lower = np.logical_and.reduce(leq[:, list(A)], axis=1)
                idx = np.flatnonzero(lower)
                sub = leq[np.ix_(idx, idx)]
                if not sub.all(axis=0).any():
                    return CrosscutCheck(False, A, checked)
    return CrosscutCheck(True, None, checked)
