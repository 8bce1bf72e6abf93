import numpy as np
import pytest
from hypothesis import given, strategies as st

from zassenhaus import linalg
from zassenhaus.field import get_field
from zassenhaus.linalg import NoSolution, NotDiagonalizable

F = get_field(5, 2)
seeds = st.integers(0, 2 ** 32 - 1)


def rand(seed, shape, rank=None):
    rng = np.random.default_rng(seed)
    if rank is None:
        return rng.integers(0, F.order, shape)
    A = rng.integers(0, F.order, (shape[0], rank))
    B = rng.integers(0, F.order, (rank, shape[1]))
    return F.matmul(A, B)


@given(seeds, st.integers(0, 5))
def test_rank_nullity(seed, r):
    M = rand(seed, (6, 7), rank=r)
    N = linalg.nullspace(F, M)
    assert linalg.rank(F, M) + len(N) == 7
    assert linalg.rank(F, M) <= r
    if len(N):
        assert linalg.is_zero(F.matmul(M, N.T))
        assert linalg.rank(F, N) == len(N)


@given(seeds)
def test_solve(seed):
    M = rand(seed, (5, 5))
    x = np.random.default_rng(seed + 1).integers(0, F.order, 5)
    b = F.matmul(M, x[:, None])[:, 0]
    y = linalg.solve(F, M, b)
    assert np.array_equal(F.matmul(M, y[:, None])[:, 0], b)


def test_solve_inconsistent():
    M = np.array([[1, 0], [0, 0]])
    with pytest.raises(NoSolution):
        linalg.solve(F, M, np.array([0, 1]))


@given(seeds)
def test_inverse(seed):
    M = rand(seed, (5, 5))
    if linalg.rank(F, M) < 5:
        with pytest.raises(Exception):
            linalg.inverse(F, M)
        return
    assert np.array_equal(F.matmul(M, linalg.inverse(F, M)), linalg.identity(5))


@given(seeds, st.integers(0, 12))
def test_matpow_matches_repeated_multiplication(seed, e):
    M = rand(seed, (4, 4))
    want = linalg.identity(4)
    for _ in range(e):
        want = F.matmul(want, M)
    assert np.array_equal(linalg.matpow(F, M, e), want)


@given(seeds)
def test_matrix_p_power(seed):
    M = rand(seed, (4, 4))
    assert np.array_equal(linalg.matrix_p_power(F, M, 1), linalg.matpow(F, M, 5))
    assert np.array_equal(linalg.matrix_p_power(F, M, 2), linalg.matpow(F, M, 25))


def test_eigen_split_diagonal_and_jordan():
    D = np.diag([1, 2, 2, 7])
    spaces = linalg.eigen_split(F, D, range(F.order))
    assert {k: len(v) for k, v in spaces.items()} == {1: 1, 2: 2, 7: 1}
    J = np.array([[1, 1], [0, 1]])
    with pytest.raises(NotDiagonalizable):
        linalg.eigen_split(F, J, range(F.order))
