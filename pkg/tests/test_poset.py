import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import antichain, chain, diamond, random_poset
from topofilt.complexes import order_complex, vertex_map_of_monotone
from topofilt.errors import EmptyPoset, NotMonotone, UnsupportedCrosscut
from topofilt.fields import FieldSpec
from topofilt.finite_space import close_transitively, coarsening_map, t0_quotient
from topofilt.homology import homology, induced_matrix
from topofilt.poset import (
    Crosscut,
    MonotoneMap,
    Poset,
    beat_points,
    compose,
    conjugate_map,
    core,
    crosscut_valid,
    identity_map,
    maximal_elements,
)

V = Poset.from_relations(3, [(0, 2), (1, 2)])
posets = st.builds(lambda m, seed, d: random_poset(np.random.default_rng(seed), m, d),
                   st.integers(1, 8), st.integers(0, 2**32), st.floats(0.1, 0.7))


def brute_beats(P):
    """Beat points straight from the definitions, in pure Python."""
    m = P.m
    le = lambda a, b: bool(P.leq[a, b])
    out = []
    for x in range(m):
        below = [y for y in range(m) if y != x and le(y, x)]
        above = [y for y in range(m) if y != x and le(x, y)]
        mx = [y for y in below if all(le(z, y) for z in below)]
        mn = [y for y in above if all(le(y, z) for z in above)]
        if mx:
            out.append((x, "down", mx[0]))
        elif mn:
            out.append((x, "up", mn[0]))
    return out


def betti(P):
    return list(homology(order_complex(P), FieldSpec(2), max_dim=8).betti)


def test_beat_points_examples():
    assert beat_points(chain(3)) == [(0, "up", 1), (1, "down", 0), (2, "down", 1)]
    assert beat_points(diamond()) == []
    assert beat_points(antichain(4)) == []


@given(posets)
def test_beat_points_match_definition(P):
    assert beat_points(P) == brute_beats(P)


def test_core_examples():
    c = core(chain(3))
    assert c.core.m == 1 and set(c.retraction.f) == {0}
    d = core(diamond())
    assert d.core == diamond() and d.retraction.f == (0, 1, 2, 3)
    v = core(V)
    assert v.core.m == 1
    assert v.removal_log[0] == (0, "up", 2)


@given(posets)
def test_core_properties(P):
    c = core(P)
    assert beat_points(c.core) == []
    assert compose(c.retraction, c.inclusion).f == tuple(range(c.core.m))
    c.retraction.check()
    c.inclusion.check()
    for x, kind, y in c.removal_log:
        assert P.leq[x, y] or P.leq[y, x]
    assert betti(P) == betti(c.core)


def test_conjugate_identity():
    for P in (chain(3), diamond(), V):
        c = core(P)
        g = conjugate_map(identity_map(P), c, c)
        assert g.f == tuple(range(c.core.m))


def test_conjugate_to_point():
    P, Q = antichain(2), chain(1)
    f = MonotoneMap(P, Q, (0, 0))
    assert conjugate_map(f, core(P), core(Q)).f == (0, 0)


def test_conjugate_chain_into_diamond():
    P, Q = chain(2), diamond()
    f = MonotoneMap(P, Q, (0, 2))
    cp, cq = core(P), core(Q)
    g = conjugate_map(f, cp, cq)
    assert cp.core.m == 1
    assert g.f == (cq.retraction.f[f.f[cp.inclusion.f[0]]],)


def test_conjugate_rejects_non_monotone():
    with pytest.raises(NotMonotone):
        conjugate_map(MonotoneMap(chain(2), chain(2), (1, 0)), core(chain(2)), core(chain(2)))


def homology_matrix(g, field=FieldSpec(2)):
    src = homology(order_complex(g.source), field, 2)
    dst = homology(order_complex(g.target), field, 2)
    return induced_matrix(vertex_map_of_monotone(g), src, dst)


@given(st.integers(2, 7), st.integers(0, 2**32), st.sampled_from([2, 3]))
def test_conjugate_composition_on_homology(n, seed, p):
    rng = np.random.default_rng(seed)
    r1 = close_transitively(rng.random((n, n)) < 0.3)
    r2 = close_transitively(r1.rel | (rng.random((n, n)) < 0.15))
    r3 = close_transitively(r2.rel | (rng.random((n, n)) < 0.15))
    q1, q2, q3 = t0_quotient(r1), t0_quotient(r2), t0_quotient(r3)
    f, g = coarsening_map(q1, q2), coarsening_map(q2, q3)
    c1, c2, c3 = core(q1.poset), core(q2.poset), core(q3.poset)
    field = FieldSpec(p)
    hf = homology_matrix(conjugate_map(f, c1, c2), field)
    hg = homology_matrix(conjugate_map(g, c2, c3), field)
    hgf = homology_matrix(conjugate_map(compose(g, f), c1, c3), field)
    for d in range(len(hgf)):
        assert np.array_equal(hgf[d], (hg[d] @ hf[d]) % p)


def test_maximal_elements():
    assert maximal_elements(chain(3)).elements == (2,)
    assert maximal_elements(diamond()).elements == (2, 3)
    assert maximal_elements(antichain(3)).elements == (0, 1, 2)
    with pytest.raises(EmptyPoset):
        maximal_elements(Poset(np.zeros((0, 0), dtype=bool)))


def test_crosscut_valid_examples():
    D = diamond()
    chk = crosscut_valid(D, maximal_elements(D))
    assert chk.valid is False and chk.certificate == (2, 3)
    P = Poset.from_relations(4, [(0, 2), (0, 3), (1, 2)])
    assert crosscut_valid(P, maximal_elements(P)).valid is True
    assert crosscut_valid(chain(4), maximal_elements(chain(4))).valid is True


def test_crosscut_unsupported():
    with pytest.raises(UnsupportedCrosscut):
        crosscut_valid(chain(3), Crosscut((1,)))


def test_crosscut_cap_is_indeterminate():
    # one bottom under 12 maximal elements: 2^12 - 13 subsets to check
    m = 13
    P = Poset.from_relations(m, [(0, j) for j in range(1, m)])
    chk = crosscut_valid(P, maximal_elements(P), cap=100)
    assert chk.valid is None
    assert crosscut_valid(P, maximal_elements(P)).valid is True


def test_hasse_edges():
    assert chain(3).hasse_edges() == [(0, 1), (1, 2)]
    assert diamond().hasse_edges() == [(0, 2), (0, 3), (1, 2), (1, 3)]
