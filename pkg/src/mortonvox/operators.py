"""Discrete differential and integral operators on voxel complexes.

Fields live on vertices (length ``|V|``), edges (``|E|``) or faces
(``|F|``). Operators are assembled from the oriented incidences of a
:class:`~mortonvox.complex.VoxelComplex` and returned as
:class:`~mortonvox.sparse.SparseMatrix` objects or dense covectors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sparse
from .complex import VoxelComplex
from .errors import UnsupportedError
from .sparse import SparseMatrix


@dataclass(frozen=True)
class OperatorSet:
    E_vectors: np.ndarray
    xi: np.ndarray
    G: SparseMatrix
    D: SparseMatrix
    L: SparseMatrix
    alpha: np.ndarray
    beta: np.ndarray
    s1: np.ndarray
    s2: np.ndarray | None
    s3: np.ndarray | None
    Omega: SparseMatrix
    A_inv: np.ndarray


def edge_geometry(X: VoxelComplex):
    """Edge vectors ``E = M V`` and their lengths."""
    E = sparse.matvec(X.M_EV, X.positions)
    xi = np.linalg.norm(E, axis=1)
    assert np.all(xi > 0), "zero-length edge"
    return E, xi


def gradient(X: VoxelComplex) -> SparseMatrix:
    """Vertex field -> edge field of directional differences per unit length."""
    _, xi = edge_geometry(X)
    return sparse.scale_rows(X.M_EV, 1.0 / xi)


def divergence(X: VoxelComplex) -> SparseMatrix:
    """Edge field -> vertex field; the transpose of :func:`gradient`."""
    return sparse.transpose(gradient(X))


def laplacian(X: VoxelComplex) -> SparseMatrix:
    """Graph Laplacian as divergence of gradient (positive semidefinite)."""
    G = gradient(X)
    return sparse.multiply(sparse.transpose(G), G)


def laplacian_weighted(X: VoxelComplex) -> SparseMatrix:
    """Same Laplacian through the edge-weighted form ``M^T diag(1/xi^2) M``."""
    _, xi = edge_geometry(X)
    return sparse.multiply(sparse.transpose(X.M_EV), sparse.scale_rows(X.M_EV, xi ** -2))


def face_areas(X: VoxelComplex) -> np.ndarray:
    _, tag = X.face_frames()
    s = X.sigma
    inplane = np.array([s[1] * s[2], s[2] * s[0], s[0] * s[1]])
    return inplane[tag]


def cell_volumes(X: VoxelComplex) -> np.ndarray:
    return np.full(len(X.cell_ids), float(np.prod(X.sigma)))


def integral_line(X: VoxelComplex) -> np.ndarray:
    """Covector summing a vertex field along all edges (trapezoid rule)."""
    _, xi = edge_geometry(X)
    return 0.5 * sparse.matvec(sparse.transpose(sparse.abs(X.M_EV)), xi)


def integral_surface(X: VoxelComplex) -> np.ndarray:
    if not len(X.face_ids):
        raise UnsupportedError("surface integral needs faces")
    return 0.25 * sparse.matvec(sparse.transpose(X.M_FV), face_areas(X))


def integral_volume(X: VoxelComplex) -> np.ndarray:
    if not len(X.cell_ids):
        raise UnsupportedError("volume integral needs cells")
    return 0.125 * sparse.matvec(sparse.transpose(X.M_CV), cell_volumes(X))


def cycle_basis(X: VoxelComplex) -> SparseMatrix:
    """Oriented face boundaries as rows; annihilates the edge incidence."""
    return X.M_FE


def cycle_basis_nullspace(X: VoxelComplex, max_edges: int = 100) -> np.ndarray:
    """Dense orthonormal basis of the left null space of ``M_EV``.

    Used to cross-check that every face cycle lies in that space. Only for
    small complexes.
    """
    from scipy.linalg import null_space

    if len(X.edge_ids) > max_edges:
        raise UnsupportedError(f"null-space check limited to {max_edges} edges")
    return null_space(X.M_EV.toarray().T).T


def curl(X: VoxelComplex, F_edge) -> np.ndarray:
    """Circulation of an edge field around each face, per unit area."""
    return sparse.matvec(X.M_FE, F_edge) / face_areas(X)


def boundary_vertices(X: VoxelComplex, full_degree: int = 6) -> np.ndarray:
    """Mask of vertices with fewer than ``full_degree`` incident edges."""
    deg = np.asarray(abs(X.M_EV.csr).sum(axis=0)).reshape(-1)
    return deg < full_degree


def _unit_edges(X):
    E, xi = edge_geometry(X)
    return E / xi[:, None]


def _normal_matrices(X, ehat):
    """Per-vertex ``sum_e ehat ehat^T`` over incident edges and its inverse."""
    src, dst = X.edge_endpoints()
    n = len(X.vertex_ids)
    outer = ehat[:, :, None] * ehat[:, None, :]
    S = np.zeros((n, 3, 3))
    np.add.at(S, src, outer)
    np.add.at(S, dst, outer)
    return S, np.linalg.pinv(S)


def _vertex_sum(X, edge_vals):
    src, dst = X.edge_endpoints()
    out = np.zeros((len(X.vertex_ids),) + edge_vals.shape[1:])
    np.add.at(out, src, edge_vals)
    np.add.at(out, dst, edge_vals)
    return out


def jacobian(X: VoxelComplex, F_vertex) -> np.ndarray:
    """Per-vertex 3x3 Jacobian ``J[i, j] = dF_i/dx_j`` of a vertex vector field.

    Edge differences ``(G F)_e`` are directional derivatives along the unit
    edge ``ehat_e``; at each vertex the incident ones are fitted in the least
    squares sense, ``J = (sum g ehat^T)(sum ehat ehat^T)^-1``. Exact for
    linear fields wherever the incident edges span all three axes.
    """
    F = np.asarray(F_vertex, dtype=np.float64).reshape(len(X.vertex_ids), -1)
    ehat = _unit_edges(X)
    gF = sparse.matvec(gradient(X), F)                      # (m, k)
    B = _vertex_sum(X, gF[:, :, None] * ehat[:, None, :])   # (n, k, 3)
    _, Sinv = _normal_matrices(X, ehat)
    return B @ Sinv


def vertex_gradient(X: VoxelComplex, f) -> np.ndarray:
    """Least-squares gradient of a scalar vertex field at each vertex."""
    f = np.asarray(f, dtype=np.float64).reshape(-1)
    ehat = _unit_edges(X)
    gf = sparse.matvec(gradient(X), f)
    _, Sinv = _normal_matrices(X, ehat)
    return np.einsum("nij,nj->ni", Sinv, _vertex_sum(X, gf[:, None] * ehat))


def hessian(X: VoxelComplex, f) -> np.ndarray:
    """Symmetrised Jacobian of the reconstructed vertex gradient."""
    H = jacobian(X, vertex_gradient(X, f))
    return 0.5 * (H + np.transpose(H, (0, 2, 1)))


def assemble(X: VoxelComplex) -> OperatorSet:
    E, xi = edge_geometry(X)
    G = gradient(X)
    has_f, has_c = len(X.face_ids) > 0, len(X.cell_ids) > 0
    alpha = face_areas(X)
    return OperatorSet(
        E_vectors=E, xi=xi, G=G, D=sparse.transpose(G),
        L=sparse.multiply(sparse.transpose(G), G),
        alpha=alpha, beta=cell_volumes(X),
        s1=integral_line(X),
        s2=integral_surface(X) if has_f else None,
        s3=integral_volume(X) if has_c else None,
        Omega=cycle_basis(X), A_inv=1.0 / alpha)


def heat_dt_bound(X: VoxelComplex) -> float:
    """Largest step the explicit heat update accepts (exclusive)."""
    _, xi = edge_geometry(X)
    deg = np.asarray(abs(X.M_EV.csr).sum(axis=0)).reshape(-1)
    return float(xi.min() ** 2 / deg.max())


def solve_heat(X: VoxelComplex, f0, dt: float, steps: int) -> np.ndarray:
    """Explicit Euler for ``df/dt = -L f``."""
    if len(X.edge_ids) == 0:
        return np.array(f0, dtype=np.float64)
    bound = heat_dt_bound(X)
    if not (dt > 0 and dt < bound):
        raise ValueError(f"dt={dt} violates the stability bound dt < {bound:.6g}")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    L = laplacian(X).csr
    f = np.array(f0, dtype=np.float64)
    for _ in range(int(steps)):
        f = f - dt * (L @ f)
    return f
