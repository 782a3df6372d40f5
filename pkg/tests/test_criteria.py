import numpy as np
import pytest
from hypothesis import given, strategies as st

from topofilt.criteria import (
    CriterionConfig,
    cost_matrix,
    critical_thresholds,
    knn_sparsity,
    link_cost,
    lipschitz_constant,
    step_relation,
)
from topofilt.errors import KOutOfRange
from topofilt.metric import PerturbationSpec, load_distance_matrix, perturb
from topofilt.samples import EQUILATERAL, FOUR_POINT_LINE, LINE3, line, random_metric

X4 = line(FOUR_POINT_LINE)


def brute_kth(D, k):
    """Sort each row by hand, skipping the diagonal."""
    out = []
    for i in range(D.n):
        others = sorted(D.entries[i, j] for j in range(D.n) if j != i)
        out.append(others[k - 1])
    return out


@pytest.mark.parametrize("k,expected", [(1, [1, 1, 2]), (2, [3, 2, 3])])
def test_knn_sparsity_line(k, expected):
    D = load_distance_matrix(LINE3)
    assert list(knn_sparsity(D, k)) == expected == brute_kth(D, k)


def test_knn_sparsity_constant():
    D = load_distance_matrix(2.5 * (np.ones((5, 5)) - np.eye(5)))
    for k in range(1, 5):
        assert np.all(knn_sparsity(D, k) == 2.5)


@pytest.mark.parametrize("k", [0, 3])
def test_k_out_of_range(k):
    D = load_distance_matrix(LINE3)
    with pytest.raises(KOutOfRange):
        knn_sparsity(D, k)


def test_k_out_of_range_in_step_relation():
    with pytest.raises(KOutOfRange):
        step_relation(load_distance_matrix(LINE3), CriterionConfig(k=5, lam=1.0), 1.0)


@given(st.integers(2, 15), st.integers(0, 500), st.data())
def test_sparsity_permutation_equivariant(n, seed, data):
    D = random_metric(seed, n)
    k = data.draw(st.integers(1, n - 1))
    perm = np.random.default_rng(seed).permutation(n)
    s = knn_sparsity(D, k)
    assert np.array_equal(knn_sparsity(D.permuted(perm), k), s[perm])
    assert np.all(s >= 0) and np.all(s <= D.entries.max())


def test_link_cost_example():
    s = knn_sparsity(X4, 2)
    np.testing.assert_allclose(s, [0.1, 0.05, 0.1, 0.25], atol=1e-12)
    assert link_cost(X4, s, 3.0, 2, 3) == pytest.approx(0.2)
    assert link_cost(X4, s, 3.0, 3, 2) == pytest.approx(0.45)
    assert link_cost(X4, s, 3.0, 1, 1) == 0
    assert link_cost(X4, s, 0.0, 3, 2) == X4.entries[3, 2]


def test_cost_matrix_agrees_with_link_cost():
    cfg = CriterionConfig(2, 3.0)
    s = knn_sparsity(X4, 2)
    c = cost_matrix(X4, cfg)
    for x in range(4):
        for y in range(4):
            assert c[x, y] == link_cost(X4, s, 3.0, x, y)


def test_step_relation_equilateral():
    D = load_distance_matrix(EQUILATERAL)
    cfg = CriterionConfig(1, 0.0)
    assert np.array_equal(step_relation(D, cfg, 0.5).pairs, np.eye(3, dtype=bool))
    assert step_relation(D, cfg, 1.0).pairs.all()


def test_step_relation_four_points():
    r = step_relation(X4, CriterionConfig(2, 3.0), 0.2).pairs
    assert r[:3, :3].all()
    assert r[2, 3] and not r[3, 2]
    assert not r[0, 3] and not r[1, 3]


def test_critical_thresholds():
    assert list(critical_thresholds(load_distance_matrix(LINE3), CriterionConfig(1, 0.0))) == [0, 1, 2, 3]
    assert list(critical_thresholds(load_distance_matrix(EQUILATERAL), CriterionConfig(1, 0.0))) == [0, 1]
    grid = critical_thresholds(X4, CriterionConfig(2, 3.0))
    assert np.any(np.isclose(grid, 0.45))
    assert grid[0] == 0 and np.all(np.diff(grid) > 0)


@pytest.mark.parametrize("lam,L", [(0.0, 1.0), (3.0, 6.0), (0.25, 1.0)])
def test_lipschitz_constant(lam, L):
    assert lipschitz_constant(CriterionConfig(2, lam)) == L


@given(st.integers(3, 12), st.integers(0, 1000), st.floats(0, 4), st.floats(0, 3), st.floats(0, 3))
def test_monotone_in_t(n, seed, lam, t1, t2):
    D = random_metric(seed, n)
    cfg = CriterionConfig(2, lam)
    lo, hi = sorted((t1, t2))
    a = step_relation(D, cfg, lo).pairs
    b = step_relation(D, cfg, hi).pairs
    assert not np.any(a & ~b)


@given(st.integers(3, 12), st.integers(0, 1000), st.sampled_from([0.0, 0.5, 2.0, 3.0]),
       st.floats(0, 0.2), st.integers(0, 2**32))
def test_relation_stability(n, seed, lam, eps, pseed):
    D = random_metric(seed, n)
    D2 = perturb(D, PerturbationSpec(eps, pseed))
    cfg = CriterionConfig(2, lam)
    L = lipschitz_constant(cfg)
    grid = critical_thresholds(D, cfg)
    for t in grid:
        a = step_relation(D, cfg, t).pairs
        b = step_relation(D2, cfg, t + L * eps + 1e-12).pairs
        assert not np.any(a & ~b)


@given(st.integers(2, 12), st.integers(0, 1000), st.floats(0, 4))
def test_extremes(n, seed, lam):
    D = random_metric(seed, n)
    cfg = CriterionConfig(2 if n > 2 else 1, lam)
    r0 = step_relation(D, cfg, 0.0).pairs
    assert np.array_equal(r0, (D.entries == 0) | np.eye(n, dtype=bool))
    top = critical_thresholds(D, cfg)[-1]
    assert step_relation(D, cfg, top).pairs.all()


@given(st.integers(2, 12), st.integers(0, 1000), st.floats(0, 5))
def test_symmetric_when_lambda_zero(n, seed, t):
    r = step_relation(random_metric(seed, n), CriterionConfig(1, 0.0), t).pairs
    assert np.array_equal(r, r.T)
