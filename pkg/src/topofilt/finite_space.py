"""Finite topologies as preorders, and the T0 quotient.

A topology on a finite set is determined by its minimal open sets ``U_x``;
``x <= y`` iff ``x`` lies in ``U_y``.  Explicit open-set families are only
used at test scale; the pipeline works on boolean relation matrices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce as _fold
from typing import Iterable

import numpy as np

from .errors import NotATopology, ValidationError
from .poset import MonotoneMap, Poset, _bool_square, _frozen_bool


@dataclass(frozen=True)
class FiniteTopology:
    n: int
    opens: frozenset

    @classmethod
    def from_sets(cls, n: int, opens: Iterable[Iterable[int]]) -> "FiniteTopology":
        return cls(n, frozenset(frozenset(o) for o in opens))

    def validate(self) -> "FiniteTopology":
        full = frozenset(range(self.n))
        if frozenset() not in self.opens or full not in self.opens:
            raise NotATopology("empty set and whole space must be open")
        for o in self.opens:
            if not o <= full:
                raise NotATopology(f"open set {sorted(o)} has points outside the space")
        for a in self.opens:
            for b in self.opens:
                if a | b not in self.opens or a & b not in self.opens:
                    raise NotATopology(f"not closed under union/intersection: {sorted(a)}, {sorted(b)}")
        return self


@dataclass(frozen=True, eq=False)
class Preorder:
    rel: np.ndarray  # rel[x, y] means x <= y

    def __post_init__(self):
        rel = _frozen_bool(self.rel)
        object.__setattr__(self, "rel", rel)
        n = rel.shape[0]
        if rel.shape != (n, n):
            raise ValidationError("relation must be square")
        if not rel.diagonal().all():
            raise ValidationError("preorder is not reflexive")
        if n and np.any(_bool_square(rel) & ~rel):
            raise ValidationError("preorder is not transitive")

    @property
    def n(self) -> int:
        return self.rel.shape[0]

    def __eq__(self, other):
        return isinstance(other, Preorder) and np.array_equal(self.rel, other.rel)

    def __hash__(self):
        return hash(self.rel.tobytes())


@dataclass(frozen=True, eq=False)
class QuotientResult:
    poset: Poset
    projection: tuple[int, ...]


def minimal_open(T: FiniteTopology, x: int) -> frozenset:
    return _fold(frozenset.intersection, (o for o in T.opens if x in o), frozenset(range(T.n)))


def preorder_of_topology(T: FiniteTopology) -> Preorder:
    T.validate()
    rel = np.zeros((T.n, T.n), dtype=bool)
    for y in range(T.n):
        for x in minimal_open(T, y):
            rel[x, y] = True
    return Preorder(rel)


def topology_of_preorder(P: Preorder) -> FiniteTopology:
    """All unions of the down-sets ``U_x = {y : y <= x}``."""
    basis = [frozenset(np.flatnonzero(P.rel[:, x]).tolist()) for x in range(P.n)]
    opens = {frozenset()}
    for u in basis:
        opens |= {o | u for o in opens}
    return FiniteTopology(P.n, frozenset(opens))


def close_transitively(rel) -> Preorder:
    """Reflexive-transitive closure by repeated boolean squaring."""
    r = np.array(rel, dtype=bool)
    np.fill_diagonal(r, True)
    while True:
        nxt = r | _bool_square(r)
        if np.array_equal(nxt, r):
            return Preorder(r)
        r = nxt


def add_pairs(closed: np.ndarray, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    """Closure of ``closed`` plus ``pairs``, where ``closed`` is already transitive.

    Adding ``a -> b`` to a transitive relation only creates ``x -> y`` for
    ``x <= a`` and ``b <= y``; applying that update per pair stays transitive.
    """
    r = np.array(closed, dtype=bool)
    for a, b in pairs:
        if r[a, b]:
            continue
        r |= np.outer(r[:, a], r[b, :])
    return r


def t0_quotient(P: Preorder) -> QuotientResult:
    """Collapse mutually comparable points.

    Since the relation is transitive, the strongly connected components of
    its digraph are exactly the classes of mutual comparability.  Classes are
    numbered by their smallest point.
    """
    rel = P.rel
    n = P.n
    mutual = rel & rel.T
    rep = mutual.argmax(axis=1)  # smallest point in each class
    reps = np.unique(rep)
    index = np.full(n, -1, dtype=int)
    index[reps] = np.arange(len(reps))
    projection = tuple(int(index[r]) for r in rep)
    leq = rel[np.ix_(reps, reps)]
    tags = [[] for _ in reps]
    for x, c in enumerate(projection):
        tags[c].append(x)
    return QuotientResult(Poset(leq, tuple(tuple(t) for t in tags)), projection)


def coarsening_map(src: QuotientResult, dst: QuotientResult) -> MonotoneMap:
    """Map each class of ``src`` to the class of ``dst`` containing its points.

    Well defined and monotone whenever the preorder behind ``dst`` contains
    the one behind ``src``; :meth:`MonotoneMap.check` enforces it.
    """
    f = []
    for tag in src.poset.element_tags:
        targets = {dst.projection[x] for x in tag}
        if len(targets) != 1:
            raise ValidationError("source class splits in the target quotient")
        f.append(targets.pop())
    return MonotoneMap(src.poset, dst.poset, tuple(f)).check()
