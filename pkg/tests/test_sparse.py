import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mortonvox import sparse
from mortonvox.sparse import IndexMap, SparseMatrix


def rand_sparse(rng, n, m, density=0.3):
    a = rng.normal(size=(n, m))
    a[rng.random((n, m)) > density] = 0
    return a


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 32), st.integers(1, 32), st.integers(1, 32), st.integers(0, 2 ** 31))
def test_ops_match_dense(n, k, m, seed):
    rng = np.random.default_rng(seed)
    a, b = rand_sparse(rng, n, k), rand_sparse(rng, k, m)
    c = rand_sparse(rng, n, k)
    A, B, C = (SparseMatrix.from_dense(x) for x in (a, b, c))
    assert np.max(np.abs(sparse.multiply(A, B).toarray() - a @ b), initial=0) <= 1e-12
    assert np.max(np.abs(sparse.add(A, C, 2.0).toarray() - (a + 2 * c)), initial=0) <= 1e-12
    np.testing.assert_array_equal(sparse.transpose(A).toarray(), a.T)
    np.testing.assert_array_equal(sparse.abs(A).toarray(), np.abs(a))
    d = rng.normal(size=n)
    np.testing.assert_allclose(sparse.scale_rows(A, d).toarray(), d[:, None] * a, atol=1e-12)
    x = rng.normal(size=k)
    np.testing.assert_allclose(sparse.matvec(A, x), a @ x, atol=1e-12)


def test_trivial_identities(rng):
    a = rand_sparse(rng, 8, 8)
    A = SparseMatrix.from_dense(a)
    assert sparse.multiply(SparseMatrix.identity(8), A) == A
    assert sparse.multiply(A, SparseMatrix.zeros(8, 8)).nnz == 0
    assert sparse.transpose(sparse.transpose(A)) == A


def test_hand_product():
    A = SparseMatrix.from_dense([[1, 2], [0, 3]])
    B = SparseMatrix.from_dense([[4, 0], [5, 6]])
    np.testing.assert_array_equal(sparse.multiply(A, B).toarray(), [[14, 12], [15, 18]])


def test_shape_mismatch():
    with pytest.raises(ValueError):
        sparse.multiply(SparseMatrix.zeros(2, 3), SparseMatrix.zeros(2, 3))


def test_canonical_form():
    A = SparseMatrix.from_coo([1, 0, 1, 0], [0, 1, 0, 0], [1.0, 2.0, 2.0, 0.0], (2, 2))
    B = SparseMatrix.from_coo([0, 1], [1, 0], [2.0, 3.0], (2, 2))
    assert A == B
    for x, y in zip(A.entries(), B.entries()):
        np.testing.assert_array_equal(x, y)
    # explicit cancellation leaves no stored zero
    C = SparseMatrix.from_coo([0, 0], [0, 0], [1.0, -1.0], (1, 1))
    assert C.nnz == 0


def test_abs_of_incidence():
    M = SparseMatrix.from_dense([[-1, 1, 0], [0, -1, 1]])
    np.testing.assert_array_equal(sparse.abs(M).toarray(), [[1, 1, 0], [0, 1, 1]])


def test_index_map():
    m = IndexMap(np.array([40, 3, 17], dtype=np.uint64))
    np.testing.assert_array_equal(m.ids, [3, 17, 40])
    np.testing.assert_array_equal(m.index(np.array([17, 5, 40, 3], dtype=np.uint64)), [1, -1, 2, 0])
    assert 40 in m and 41 not in m
    assert len(m) == 3
    with pytest.raises(KeyError):
        m.index_strict(np.array([5], dtype=np.uint64))


def test_index_map_duplicates():
    assert len(IndexMap(np.array([1, 1, 0], dtype=np.uint64))) == 2
    with pytest.raises(ValueError):
        IndexMap(np.array([1, 1], dtype=np.uint64), assume_sorted=True)
