"""Small sparse real-matrix layer on top of scipy's CSR format.

Every :class:`SparseMatrix` is kept canonical: column indices sorted within
rows, duplicates summed and explicit zeros dropped. Equal matrices therefore
have identical entry sequences.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ._backend import kernels


class SparseMatrix:
    __slots__ = ("_csr",)

    def __init__(self, csr):
        csr = sp.csr_matrix(csr, dtype=np.float64, copy=True)
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        self._csr = csr

    @classmethod
    def from_coo(cls, rows, cols, values, shape) -> "SparseMatrix":
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        values = np.broadcast_to(np.asarray(values, dtype=np.float64), rows.shape)
        n, m = shape
        if rows.size and (rows.min() < 0 or rows.max() >= n or cols.min() < 0 or cols.max() >= m):
            raise ValueError("index out of range")
        return cls(sp.coo_matrix((values, (rows, cols)), shape=(n, m)))

    @classmethod
    def from_dense(cls, a) -> "SparseMatrix":
        return cls(sp.csr_matrix(np.asarray(a, dtype=np.float64)))

    @classmethod
    def identity(cls, n) -> "SparseMatrix":
        return cls(sp.identity(n, format="csr"))

    @classmethod
    def zeros(cls, n, m) -> "SparseMatrix":
        return cls(sp.csr_matrix((n, m)))

    @property
    def shape(self):
        return self._csr.shape

    @property
    def rows(self) -> int:
        return self._csr.shape[0]

    @property
    def cols(self) -> int:
        return self._csr.shape[1]

    @property
    def nnz(self) -> int:
        return self._csr.nnz

    @property
    def csr(self):
        """The underlying canonical scipy CSR matrix (treat as read-only)."""
        return self._csr

    def entries(self):
        """``(row, col, value)`` arrays in row-major order."""
        c = self._csr
        rows = np.repeat(np.arange(c.shape[0], dtype=np.int64), np.diff(c.indptr))
        return rows, c.indices.astype(np.int64), c.data.copy()

    def row_nnz(self) -> np.ndarray:
        return np.diff(self._csr.indptr)

    def toarray(self) -> np.ndarray:
        return self._csr.toarray()

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = self._csr, other._csr
        return (np.array_equal(a.indptr, b.indptr) and np.array_equal(a.indices, b.indices)
                and np.array_equal(a.data, b.data))

    __hash__ = None

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            return multiply(self, other)
        return matvec(self, other)

    @property
    def T(self) -> "SparseMatrix":
        return transpose(self)

    def __repr__(self):
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


def multiply(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    if a.cols != b.rows:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    return SparseMatrix(a.csr @ b.csr)


def add(a: SparseMatrix, b: SparseMatrix, alpha=1.0) -> SparseMatrix:
    """``a + alpha * b``."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} + {b.shape}")
    return SparseMatrix(a.csr + alpha * b.csr)


def transpose(a: SparseMatrix) -> SparseMatrix:
    return SparseMatrix(a.csr.T)


def scale_rows(a: SparseMatrix, d) -> SparseMatrix:
    """Multiply row ``i`` by ``d[i]`` (a diagonal product without the diagonal)."""
    d = np.asarray(d, dtype=np.float64).reshape(-1)
    if d.size != a.rows:
        raise ValueError("scale vector length does not match row count")
    c = a.csr.copy()
    c.data = c.data * np.repeat(d, np.diff(c.indptr))
    return SparseMatrix(c)


def abs(a: SparseMatrix) -> SparseMatrix:  # noqa: A001 - mirrors the math notation
    c = a.csr.copy()
    c.data = np.abs(c.data)
    return SparseMatrix(c)


def matvec(a: SparseMatrix, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] != a.cols:
        raise ValueError(f"vector length {x.shape[0]} does not match {a.cols} columns")
    return a.csr @ x


class IndexMap:
    """Bijection between sorted unique global IDs and ordinals ``0..n-1``."""

    __slots__ = ("ids",)

    def __init__(self, ids, assume_sorted=False):
        ids = np.asarray(ids, dtype=np.uint64).reshape(-1)
        if not assume_sorted:
            ids = np.unique(ids)
        elif ids.size > 1 and not np.all(ids[1:] > ids[:-1]):
            raise ValueError("ids are not strictly increasing")
        self.ids = ids

    def __len__(self):
        return int(self.ids.size)

    def index(self, queries) -> np.ndarray:
        """Ordinals of ``queries``; -1 where an ID is absent."""
        return kernels.lookup(self.ids, np.asarray(queries, dtype=np.uint64))

    def index_strict(self, queries) -> np.ndarray:
        idx = self.index(queries)
        if np.any(idx < 0):
            raise KeyError("unknown global id")
        return idx

    def __contains__(self, key):
        return bool(self.index(np.array([key], dtype=np.uint64))[0] >= 0)

    def __eq__(self, other):
        return isinstance(other, IndexMap) and np.array_equal(self.ids, other.ids)

    __hash__ = None

    def __repr__(self):
        return f"IndexMap(n={len(self)})"
