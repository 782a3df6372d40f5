import itertools
import json
import math
from importlib import resources

import jsonschema
import numpy as np
import pytest
from hypothesis import given, strategies as st

from topofilt import fields as ff
from topofilt.persistence import (
    PersistenceDiagram,
    PersistenceModule,
    bottleneck,
    interval_multiplicities,
    module_diagram,
    rank_function,
    reconstruction_holds,
    to_diagram,
)

I1, Z1 = np.eye(1, dtype=np.int64), np.zeros((1, 1), dtype=np.int64)


def module(dims, maps, p=2):
    return PersistenceModule(np.arange(len(dims), dtype=float), tuple(dims), tuple(np.asarray(m, dtype=np.int64) for m in maps), p)


def random_module(rng, p, length=None, maxdim=3):
    length = length or int(rng.integers(1, 9))
    dims = rng.integers(0, maxdim + 1, size=length).tolist()
    maps = []
    for i in range(length - 1):
        m = rng.integers(0, p, size=(dims[i + 1], dims[i]))
        # bias towards identities so isomorphism runs occur
        if dims[i] == dims[i + 1] and rng.random() < 0.4:
            m = np.eye(dims[i], dtype=np.int64)
        maps.append(m)
    return module(dims, maps, p)


def naive_ranks(M):
    """r(i, j) by multiplying out every composite from scratch."""
    n = len(M.dims)
    out = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i, n):
            prod = np.eye(M.dims[i], dtype=np.int64)
            for k in range(i, j):
                prod = (M.maps[k] @ prod) % M.p
            out[i, j] = ff.rank(prod, M.p)
    return out


modules = st.builds(lambda seed, p: random_module(np.random.default_rng(seed), p),
                    st.integers(0, 2**32), st.sampled_from([2, 3, 5]))


def test_rank_function_example():
    R = rank_function(module((1, 1, 1), (I1, Z1)))
    assert (R(0, 1), R(1, 2), R(0, 2)) == (1, 0, 0)
    assert [R(i, i) for i in range(3)] == [1, 1, 1]


def test_rank_function_identity_and_zero():
    R = rank_function(module((2, 2, 2, 2), [np.eye(2)] * 3))
    assert all(R(i, j) == 2 for i in range(4) for j in range(i, 4))
    R = rank_function(module((2, 2, 2), [np.zeros((2, 2))] * 2))
    assert all(R(i, j) == 0 for i in range(3) for j in range(i + 1, 3))


@given(modules)
def test_rank_function_matches_naive(M):
    R = rank_function(M)
    assert np.array_equal(R.full(), naive_ranks(M))
    full = R.full()
    n = len(M.dims)
    for i, j in itertools.combinations_with_replacement(range(n), 2):
        if i > 0 and j < n - 1:
            assert full[i - 1, j + 1] <= full[i, j]


def test_interval_examples():
    assert interval_multiplicities(rank_function(module((1, 1, 1), (I1, Z1)))) == {(0, 1): 1, (2, 2): 1}
    assert interval_multiplicities(rank_function(module((1,) * 4, [I1] * 3))) == {(0, 3): 1}
    assert interval_multiplicities(rank_function(module((2, 2), [np.zeros((2, 2))]))) == {(0, 0): 2, (1, 1): 2}


@given(modules)
def test_decomposition_is_exact(M):
    R = rank_function(M)
    mu = interval_multiplicities(R)
    assert all(k > 0 for k in mu.values())
    assert reconstruction_holds(R, mu)
    # multiplicities at each index add up to the dimension
    for i, d in enumerate(M.dims):
        assert sum(k for (a, b), k in mu.items() if a <= i <= b) == d


def test_to_diagram():
    grid = [0.0, 1.0, 2.0, 3.0]
    pts = to_diagram({(0, 0): 1, (0, 1): 1, (0, 3): 1}, grid)
    assert pts == ((0.0, 1.0, 1), (0.0, 2.0, 1), (0.0, math.inf, 1))
    assert to_diagram({(0, 3): 1}, grid) == ((0.0, math.inf, 1),)
    assert to_diagram({}, grid) == ()


@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 2**32), st.sampled_from([2, 3]))
def test_isomorphisms_give_only_essential_bars(length, d, seed, p):
    rng = np.random.default_rng(seed)
    maps = []
    while len(maps) < length - 1:
        m = rng.integers(0, p, size=(d, d))
        if ff.rank(m, p) == d:
            maps.append(m)
    pts = module_diagram(module([d] * length, maps, p))
    assert pts == ((0.0, math.inf, d),)


def D(*pts, n=0):
    c = {}
    for b, d in pts:
        c[(float(b), float(d))] = c.get((float(b), float(d)), 0) + 1
    return PersistenceDiagram({n: tuple((b, d, k) for (b, d), k in sorted(c.items()))})


def brute_bottleneck(A, B):
    """Every matching of A plus diagonal copies against B plus diagonal copies."""
    A = [q for q in A if not math.isinf(q[1])]
    B = [q for q in B if not math.isinf(q[1])]
    left = [("pt", q) for q in A] + [("diag", q) for q in B]
    right = [("pt", q) for q in B] + [("diag", q) for q in A]
    best = math.inf
    for perm in itertools.permutations(range(len(right))):
        worst = 0.0
        for (lk, lq), r in zip(left, perm):
            rk, rq = right[r]
            if lk == "pt" and rk == "pt":
                c = max(abs(lq[0] - rq[0]), abs(lq[1] - rq[1]))
            elif lk == "pt":
                c = (lq[1] - lq[0]) / 2 if rq is lq else math.inf
            elif rk == "pt":
                c = (rq[1] - rq[0]) / 2 if lq is rq else math.inf
            else:
                c = 0.0
            worst = max(worst, c)
        best = min(best, worst)
    return best if left else 0.0


def test_bottleneck_examples():
    A = D((0, 2))
    assert bottleneck(A, A, 0) == 0
    assert bottleneck(A, D(), 0) == 1
    assert bottleneck(A, D((0, 3)), 0) == 1


def test_bottleneck_infinite_points():
    assert bottleneck(D((0, math.inf)), D((0.5, math.inf)), 0) == 0.5
    assert bottleneck(D((0, math.inf)), D((0, math.inf), (0, math.inf)), 0) == math.inf


finite_pts = st.lists(st.tuples(st.integers(0, 20), st.integers(1, 20)).map(lambda t: (t[0] / 4, t[0] / 4 + t[1] / 4)),
                      max_size=3)


@given(finite_pts, finite_pts)
def test_bottleneck_matches_brute_force(a, b):
    A, B = D(*a), D(*b)
    assert bottleneck(A, B, 0) == pytest.approx(brute_bottleneck(A.expanded(0), B.expanded(0)), abs=1e-12)


@given(finite_pts, finite_pts, finite_pts)
def test_bottleneck_pseudometric(a, b, c):
    A, B, C = D(*a), D(*b), D(*c)
    assert bottleneck(A, B, 0) == bottleneck(B, A, 0)
    assert bottleneck(A, C, 0) <= bottleneck(A, B, 0) + bottleneck(B, C, 0) + 1e-12


def schema(name):
    return json.loads(resources.files("topofilt").joinpath(f"schemas/{name}.schema.json").read_text())


def test_diagram_json_round_trip():
    dg = PersistenceDiagram({0: ((0.0, 1.0, 2), (0.0, math.inf, 1)), 1: ((0.5, 0.75, 1),)}, 3)
    text = dg.to_json()
    doc = json.loads(text)
    jsonschema.validate(doc, schema("diagram"))
    assert doc["diagrams"]["0"][1]["death"] is None
    assert PersistenceDiagram.from_json(text) == dg
    assert PersistenceDiagram.from_json(text).to_json() == text


def test_diagram_csv_round_trip():
    dg = PersistenceDiagram({0: ((0.0, 1.0, 2), (0.0, math.inf, 1)), 1: ((0.5, 0.75, 1),)})
    text = dg.to_csv()
    assert text.splitlines()[0] == "degree,birth,death,mult"
    assert "inf" in text
    assert PersistenceDiagram.from_csv(text) == dg
