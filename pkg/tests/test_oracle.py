import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stepsel.core import correlation, run_ufs, run_urs, run_ufrs, standardize
from stepsel.errors import SingularSubset, TooLarge
from stepsel.oracle import (
    best_subset_exhaustive,
    naive_greedy,
    projection_error_direct,
    projection_error_gram,
)

from .conftest import instance


def test_empty_subset_costs_n():
    Z, _ = instance(0, 5)
    assert projection_error_direct(Z, []) == pytest.approx(5.0, abs=1e-12)
    assert projection_error_gram(np.eye(5), []) == 5.0


def test_full_subset_costs_zero():
    Z, M = instance(0, 5)
    assert projection_error_direct(Z, range(5)) == pytest.approx(0.0, abs=1e-10)
    assert projection_error_gram(M, range(5)) == 0.0


def test_near_collinear_residual():
    rng = np.random.default_rng(1)
    base = np.array([1.0, 2.0, 3.0, 5.0, 4.0])
    Z = standardize([base, 2 * base + 1e-3 * rng.normal(size=5), rng.normal(size=5)])
    # direct residual of row 1 against row 0
    r0, r1 = Z.values[0], Z.values[1]
    resid = r1 - (r1 @ r0) * r0
    assert resid @ resid < 1e-6
    total = projection_error_direct(Z, [0])
    r2 = Z.values[2]
    expected = resid @ resid + (r2 - (r2 @ r0) * r0) @ (r2 - (r2 @ r0) * r0)
    assert total == pytest.approx(expected, abs=1e-12)


def test_singular_subset():
    base = np.array([1.0, 2.0, 4.0, 3.0])
    Z = standardize([base, 3 * base - 2, [1.0, 0.0, 0.0, 2.0]])
    with pytest.raises(SingularSubset):
        projection_error_direct(Z, [0, 1])
    with pytest.raises(SingularSubset):
        projection_error_gram(correlation(Z), [0, 1])


@pytest.mark.parametrize("seed", range(5))
def test_gram_and_data_modes_agree(seed):
    Z, M = instance(seed, 8, n_factors=2)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        s = rng.choice(8, size=rng.integers(0, 9), replace=False)
        assert projection_error_gram(M, s) == pytest.approx(projection_error_direct(Z, s), abs=1e-10)


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(3, 10), data=st.data())
def test_error_monotone_under_growth(seed, n, data):
    Z, _ = instance(seed, n)
    small = data.draw(st.sets(st.integers(0, n - 1)))
    extra = data.draw(st.sets(st.integers(0, n - 1)))
    big = small | extra
    e_small = projection_error_direct(Z, small)
    e_big = projection_error_direct(Z, big)
    assert e_big <= e_small + 1e-9
    assert -1e-8 <= e_big <= n + 1e-8


def test_naive_identity():
    assert naive_greedy(np.eye(4), "forward", gram=True).ordering == [0, 1, 2, 3]
    assert naive_greedy(np.eye(4), "reverse", gram=True).ordering == [0, 1, 2, 3]


@pytest.mark.parametrize("seed", range(3))
def test_naive_matches_fast_n12(seed):
    Z, M = instance(seed, 12, n_factors=3)
    for fast, direction in ((run_ufs, "forward"), (run_urs, "reverse")):
        a, b = fast(M), naive_greedy(Z, direction)
        assert a.ordering == b.ordering
        np.testing.assert_allclose(a.costs, b.costs, atol=1e-8 * 12)


def test_exhaustive_identity():
    best = best_subset_exhaustive(np.eye(5), 2, gram=True)
    assert best.subset == (0, 1)
    assert best.error == pytest.approx(3.0)
    assert best_subset_exhaustive(np.eye(5), 5, gram=True).error == 0.0


@pytest.mark.parametrize("seed", range(3))
def test_exhaustive_lower_bounds_greedy(seed):
    Z, M = instance(seed, 8, n_factors=2)
    best = best_subset_exhaustive(Z, 3)
    assert best.error <= run_ufs(M).costs[2] + 1e-9
    assert best.error <= run_urs(M).cost_at(3) + 1e-9
    assert best.error <= run_ufrs(M, 2).per_size[3].cost + 1e-9


def test_exhaustive_guard():
    with pytest.raises(TooLarge):
        best_subset_exhaustive(np.eye(16), 2, gram=True)
