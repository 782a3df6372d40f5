"""Order complexes, crosscut complexes and simplicial vertex maps.

Simplices are ascending vertex tuples; the ascending order is also the
orientation used for homology.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ComplexityCapExceeded, NotMonotone, UnsupportedCrosscut, ValidationError
from .poset import Crosscut, MonotoneMap, Poset, crosscut_generators, maximal_elements

DEFAULT_SIMPLEX_CAP = 5_000_000


def default_simplex_cap() -> int:
    env = os.environ.get("TOPOFILT_CAP_SIMPLICES")
    return int(env) if env else DEFAULT_SIMPLEX_CAP


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    n_vertices: int
    by_dim: tuple[tuple[tuple[int, ...], ...], ...]
    _index: list = field(default_factory=list, repr=False, compare=False)

    @classmethod
    def from_simplices(cls, n_vertices: int, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Build from a face-closed collection (duplicates are dropped)."""
        buckets: dict[int, set] = {}
        for s in simplices:
            s = tuple(sorted(s))
            if s:
                buckets.setdefault(len(s) - 1, set()).add(s)
        top = max(buckets) if buckets else -1
        by_dim = tuple(tuple(sorted(buckets.get(d, ()))) for d in range(top + 1))
        return cls(n_vertices, by_dim)

    @classmethod
    def from_facets(cls, n_vertices: int, facets: Iterable[Iterable[int]], cap: int | None = None) -> "SimplicialComplex":
        cap = default_simplex_cap() if cap is None else cap
        faces: set = set((v,) for v in range(n_vertices))
        for f in facets:
            f = tuple(sorted(set(f)))
            if 2 ** len(f) - 1 > cap:
                raise ComplexityCapExceeded(f"facet of size {len(f)} exceeds the simplex cap {cap}")
            for size in range(1, len(f) + 1):
                faces.update(itertools.combinations(f, size))
            if len(faces) > cap:
                raise ComplexityCapExceeded(f"more than {cap} simplices")
        return cls.from_simplices(n_vertices, faces)

    @property
    def dimension(self) -> int:
        return len(self.by_dim) - 1

    def simplices(self, dim: int) -> tuple[tuple[int, ...], ...]:
        return self.by_dim[dim] if 0 <= dim < len(self.by_dim) else ()

    def __len__(self) -> int:
        return sum(len(s) for s in self.by_dim)

    def __iter__(self):
        for layer in self.by_dim:
            yield from layer

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.n_vertices == other.n_vertices and self.by_dim == other.by_dim

    def index(self, dim: int) -> dict:
        """Position of each ``dim``-simplex in :meth:`simplices`."""
        if not self._index:
            self._index.extend({s: i for i, s in enumerate(layer)} for layer in self.by_dim)
        return self._index[dim] if 0 <= dim < len(self._index) else {}

    def facets(self) -> list[tuple[int, ...]]:
        out = []
        for d, layer in enumerate(self.by_dim):
            above = self.index(d + 1)
            cofaces: set = set()
            for s in above:
                for i in range(len(s)):
                    cofaces.add(s[:i] + s[i + 1:])
            out.extend(s for s in layer if s not in cofaces)
        return sorted(out)

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(layer) for d, layer in enumerate(self.by_dim))

    def check(self) -> "SimplicialComplex":
        """Structural audit: sorted, unique, face-closed, every vertex present."""
        if self.simplices(0) != tuple((v,) for v in range(self.n_vertices)):
            raise ValidationError("vertices must be exactly 0..n-1")
        for d, layer in enumerate(self.by_dim):
            if len(set(layer)) != len(layer) or list(layer) != sorted(layer):
                raise ValidationError(f"duplicate or unsorted {d}-simplices")
            lower = self.index(d - 1) if d else None
            for s in layer:
                if len(s) != d + 1 or list(s) != sorted(set(s)):
                    raise ValidationError(f"malformed simplex {s}")
                if d and any(s[:i] + s[i + 1:] not in lower for i in range(len(s))):
                    raise ValidationError(f"face of {s} missing")
        return self


def order_complex(P: Poset, cap: int | None = None) -> SimplicialComplex:
    """All nonempty chains of ``P``."""
    cap = default_simplex_cap() if cap is None else cap
    m = P.m
    succ = [np.flatnonzero(row).tolist() for row in P.lt]
    layers: list[list[tuple[int, ...]]] = []
    count = 0

    # chains are grown upward from their minimum
    stack = [(v,) for v in range(m - 1, -1, -1)]
    while stack:
        chain = stack.pop()
        count += 1
        if count > cap:
            raise ComplexityCapExceeded(f"order complex exceeds {cap} simplices")
        d = len(chain) - 1
        if d == len(layers):
            layers.append([])
        layers[d].append(tuple(sorted(chain)))
        for w in succ[chain[-1]]:
            stack.append(chain + (w,))
    return SimplicialComplex(m, tuple(tuple(sorted(layer)) for layer in layers))


def crosscut_complex(P: Poset, C: Crosscut, cap: int | None = None) -> SimplicialComplex:
    """Subsets of the maximal elements having a common lower bound.

    Vertices are numbered by position in ``C.elements``.
    """
    if P.m == 0 or C != maximal_elements(P):
        raise UnsupportedCrosscut("only the maximal-element crosscut is supported")
    pos = {c: i for i, c in enumerate(C.elements)}
    facets = [[pos[c] for c in g] for g in crosscut_generators(P, C)]
    return SimplicialComplex.from_facets(len(C.elements), facets, cap)


@dataclass(frozen=True, eq=False)
class SimplicialVertexMap:
    source: SimplicialComplex
    target: SimplicialComplex
    vertex_map: tuple[int, ...]
    degenerate: int = 0  # number of simplices whose image has lower dimension

    def check(self) -> "SimplicialVertexMap":
        degenerate = 0
        for s in self.source:
            img = tuple(sorted({self.vertex_map[v] for v in s}))
            if img not in self.target.index(len(img) - 1):
                raise ValidationError(f"image of {s} is not a simplex of the target")
            degenerate += len(img) < len(s)
        object.__setattr__(self, "degenerate", degenerate)
        return self


def vertex_map_of_monotone(f: MonotoneMap, source: SimplicialComplex | None = None,
                           target: SimplicialComplex | None = None) -> SimplicialVertexMap:
    """The simplicial map between order complexes induced by a monotone map."""
    f.check()
    source = order_complex(f.source) if source is None else source
    target = order_complex(f.target) if target is None else target
    if source.n_vertices != f.source.m or target.n_vertices != f.target.m:
        raise NotMonotone("complexes do not match the map's posets")
    return SimplicialVertexMap(source, target, f.f).check()


def compose_vertex_maps(g: SimplicialVertexMap, f: SimplicialVertexMap) -> SimplicialVertexMap:
    return SimplicialVertexMap(f.source, g.target, tuple(g.vertex_map[v] for v in f.vertex_map)).check()
