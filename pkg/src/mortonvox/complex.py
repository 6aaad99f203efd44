"""Voxel complexes built from a cloud and stencils.

Vertices are voxels keyed by their Morton code. Edges are keyed by the 6D
code ``interleave2(lo, hi)`` of their end voxels with ``lo < hi``, which also
fixes their orientation (``-1`` at ``lo``, ``+1`` at ``hi``). Faces are
keyed by ``corner << 2 | tag`` where ``tag`` is the normal axis, cells by
their minimum corner code. Adding a face or cell also adds its boundary.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import morton
from . import sparse
from .errors import RangeError, UnsupportedError
from .sparse import IndexMap, SparseMatrix
from .stencil import Stencil
from .voxelize import VoxelCloud

GATES = ("each", "all")
_E = np.eye(3, dtype=np.int64)
_U64 = np.uint64


@dataclass(frozen=True)
class VoxelComplex:
    cloud: VoxelCloud
    vertex_ids: IndexMap
    edge_ids: IndexMap
    face_ids: IndexMap
    cell_ids: IndexMap
    M_EV: SparseMatrix   # oriented, |E| x |V|
    M_FV: SparseMatrix   # unoriented, |F| x |V|
    M_FE: SparseMatrix   # oriented, |F| x |E|
    M_CV: SparseMatrix   # unoriented, |C| x |V|
    M_CF: SparseMatrix   # oriented, |C| x |F|
    M_CE: SparseMatrix   # unoriented, |C| x |E|

    @property
    def counts(self) -> dict:
        return {"V": len(self.vertex_ids), "E": len(self.edge_ids),
                "F": len(self.face_ids), "C": len(self.cell_ids)}

    @property
    def positions(self) -> np.ndarray:
        """Vertex centroids in grid space, one row per vertex ordinal."""
        return self.cloud.centroids

    @property
    def sigma(self) -> np.ndarray:
        return self.cloud.sigma

    def edge_endpoints(self):
        """``(src, dst)`` vertex ordinals of every edge."""
        lo, hi = morton.deinterleave2_array(self.edge_ids.ids)
        return self.vertex_ids.index(lo), self.vertex_ids.index(hi)

    def face_frames(self):
        """``(corner code, normal axis)`` of every face."""
        ids = self.face_ids.ids
        return ids >> _U64(2), (ids & _U64(3)).astype(np.int64)


def face_key(corner, tag) -> np.ndarray:
    corner = np.asarray(corner, dtype=np.uint64)
    if corner.size and corner.max() >= (1 << 62):
        raise RangeError("corner code too large for a face key")
    return (corner << _U64(2)) | np.asarray(tag, dtype=np.uint64)


def _step(codes, delta):
    out, ok = morton.offset3_array(codes, delta)
    if not np.all(ok):
        raise RangeError("neighbour leaves the index range")
    return out


def _edge_key(a, b):
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return morton.interleave2_array(lo, hi)


def _face_vertices(corner, tag):
    """Codes of the 4 face corners in cycle order p, p+e_b, p+e_b+e_c, p+e_c."""
    out = np.empty((corner.size, 4), dtype=np.uint64)
    for a in range(3):
        sel = tag == a
        if not sel.any():
            continue
        b, c = (a + 1) % 3, (a + 2) % 3
        p = corner[sel]
        out[sel, 0] = p
        out[sel, 1] = _step(p, _E[b])
        out[sel, 2] = _step(p, _E[b] + _E[c])
        out[sel, 3] = _step(p, _E[c])
    return out


# cycle edges of a face and their sign relative to lo->hi orientation
_FACE_CYCLE = ((0, 1, 1.0), (1, 2, 1.0), (3, 2, -1.0), (0, 3, -1.0))
_CUBE = [tuple(int(x) for x in o) for o in np.ndindex(2, 2, 2)]


def _cell_vertices(corner):
    return np.stack([_step(corner, o) for o in _CUBE], axis=1) if corner.size else \
        np.empty((0, 8), dtype=np.uint64)


def _cell_faces(corner):
    """6 face keys per cell with their orientation sign."""
    keys, signs = [], []
    for a in range(3):
        keys.append(face_key(corner, a))
        signs.append(-1.0)
        keys.append(face_key(_step(corner, _E[a]), a))
        signs.append(1.0)
    if not corner.size:
        return np.empty((0, 6), dtype=np.uint64), np.array(signs)
    return np.stack(keys, axis=1), np.array(signs)


def _cell_edges(corner):
    keys = []
    for a in range(3):
        b, c = (a + 1) % 3, (a + 2) % 3
        for i in (0, 1):
            for j in (0, 1):
                p = _step(corner, i * _E[b] + j * _E[c])
                keys.append(_edge_key(p, _step(p, _E[a])))
    return np.stack(keys, axis=1) if corner.size else np.empty((0, 12), dtype=np.uint64)


def _rows(n, k):
    return np.repeat(np.arange(n, dtype=np.int64), k)


def from_ids(cloud: VoxelCloud, edge_ids=(), face_ids=(), cell_ids=(), close=True) -> VoxelComplex:
    """Assemble a complex from explicit global IDs.

    With ``close=True`` the faces of every cell and the edges of every face
    are added. Every referenced vertex must be in the cloud.
    """
    vmap = IndexMap(cloud.codes, assume_sorted=True)
    cells = np.unique(np.asarray(cell_ids, dtype=np.uint64))
    faces = np.asarray(face_ids, dtype=np.uint64)
    edges = np.asarray(edge_ids, dtype=np.uint64)
    if close:
        faces = np.concatenate([faces, _cell_faces(cells)[0].reshape(-1)])
    faces = np.unique(faces)
    f_corner = faces >> _U64(2)
    f_tag = (faces & _U64(3)).astype(np.int64)
    if np.any(f_tag > 2):
        raise ValueError("invalid face tag")
    f_verts = _face_vertices(f_corner, f_tag)
    f_edges = np.stack([_edge_key(f_verts[:, i], f_verts[:, j]) for i, j, _ in _FACE_CYCLE],
                       axis=1) if faces.size else np.empty((0, 4), dtype=np.uint64)
    if close:
        edges = np.concatenate([edges, f_edges.reshape(-1)])
    emap = IndexMap(edges)
    fmap = IndexMap(faces, assume_sorted=True)
    cmap = IndexMap(cells, assume_sorted=True)
    nv, ne, nf, nc = len(vmap), len(emap), len(fmap), len(cmap)

    lo, hi = morton.deinterleave2_array(emap.ids)
    src, dst = vmap.index(lo), vmap.index(hi)
    if np.any(src < 0) or np.any(dst < 0):
        raise ValueError("edge references a voxel missing from the cloud")
    if np.any(lo >= hi):
        raise ValueError("edge ids must be stored with source code < destination code")
    m_ev = SparseMatrix.from_coo(np.concatenate([np.arange(ne), np.arange(ne)]),
                                 np.concatenate([src, dst]),
                                 np.concatenate([-np.ones(ne), np.ones(ne)]), (ne, nv))

    fv = vmap.index(f_verts.reshape(-1))
    if np.any(fv < 0):
        raise ValueError("face references a voxel missing from the cloud")
    m_fv = SparseMatrix.from_coo(_rows(nf, 4), fv, 1.0, (nf, nv))
    fe = emap.index(f_edges.reshape(-1))
    if np.any(fe < 0):
        raise ValueError("face boundary edge missing from the complex")
    m_fe = SparseMatrix.from_coo(_rows(nf, 4), fe, np.tile([s for *_, s in _FACE_CYCLE], nf),
                                 (nf, ne))

    cv = vmap.index(_cell_vertices(cells).reshape(-1))
    if np.any(cv < 0):
        raise ValueError("cell references a voxel missing from the cloud")
    m_cv = SparseMatrix.from_coo(_rows(nc, 8), cv, 1.0, (nc, nv))
    c_faces, c_signs = _cell_faces(cells)
    cf = fmap.index(c_faces.reshape(-1))
    if np.any(cf < 0):
        raise ValueError("cell boundary face missing from the complex")
    m_cf = SparseMatrix.from_coo(_rows(nc, 6), cf, np.tile(c_signs, nc), (nc, nf))
    ce = emap.index(_cell_edges(cells).reshape(-1))
    if np.any(ce < 0):
        raise ValueError("cell boundary edge missing from the complex")
    m_ce = SparseMatrix.from_coo(_rows(nc, 12), ce, 1.0, (nc, ne))
    return VoxelComplex(cloud, vmap, emap, fmap, cmap, m_ev, m_fv, m_fe, m_cv, m_cf, m_ce)


def construct(cloud: VoxelCloud, stencils, gate: str = "each", close: bool = True) -> VoxelComplex:
    """Sweep stencils over every voxel and collect the hyper-edges they emit.

    Neighbours are located by adding the stencil's signed Morton offsets to
    each voxel code. With ``gate="each"`` a hyper-edge is emitted when its
    own voxels are present; ``gate="all"`` requires the whole condition set.
    Edge codes are formed in 6D from the anchor's self-edge
    ``interleave2(iota, iota)`` plus the stencil's edge offsets.
    """
    if isinstance(stencils, Stencil):
        stencils = [stencils]
    if gate not in GATES:
        raise ValueError(f"gate must be one of {GATES}")
    vmap = IndexMap(cloud.codes, assume_sorted=True)
    codes = vmap.ids
    edge_parts, face_parts, cell_parts = [], [], []
    for st in stencils:
        nbr, present = [], []
        for off in st.cond:
            nb, ok = morton.offset3_array(codes, off)
            nbr.append(nb)
            present.append(ok & (vmap.index(nb) >= 0))
        full = np.logical_and.reduce(present) if gate == "all" else None

        def gate_of(idx):
            return full if full is not None else np.logical_and.reduce([present[i] for i in idx])

        pairs = [(i, j) for i, j in st.edges]
        if pairs and codes.size and codes.max() >= morton.MAX_CODE6_SOURCE:
            raise RangeError("voxel codes exceed 10 bits per axis; edge codes would overflow")
        for (i, j), eps_off in zip(pairs, st.edge_codes):
            sel = gate_of((i, j))
            anchors = codes[sel]
            eps, ok = morton.offset6_array(morton.interleave2_array(anchors, anchors),
                                           st.cond[i], st.cond[j])
            if not np.all(ok):
                raise RangeError("edge code overflow")
            flip = nbr[i][sel] > nbr[j][sel]
            edge_parts.append(np.where(flip, morton.swap_edge(eps), eps))
        for f, (corner, normal) in zip(st.faces, st.face_frames()):
            sel = gate_of(f)
            c, _ = morton.offset3_array(codes[sel], corner)
            face_parts.append(face_key(c, normal))
        for cl, corner in zip(st.cells, st.cell_corners()):
            sel = gate_of(cl)
            c, _ = morton.offset3_array(codes[sel], corner)
            cell_parts.append(c)

    def cat(parts):
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.uint64)

    return from_ids(cloud, cat(edge_parts), cat(face_parts), cat(cell_parts), close=close)


def adjacency(X: VoxelComplex, dim: str = "vertex") -> SparseMatrix:
    """Unoriented adjacency products; the diagonal holds incidence counts."""
    if dim == "vertex":
        m = sparse.abs(X.M_EV)
        return sparse.multiply(sparse.transpose(m), m)
    if dim == "edge":
        m = sparse.abs(X.M_EV)
        return sparse.multiply(m, sparse.transpose(m))
    if dim == "face":
        if not len(X.face_ids):
            raise UnsupportedError("complex has no faces")
        return sparse.multiply(X.M_FV, sparse.transpose(X.M_FV))
    if dim == "cell":
        if not len(X.cell_ids):
            raise UnsupportedError("complex has no cells")
        return sparse.multiply(X.M_CV, sparse.transpose(X.M_CV))
    raise ValueError(f"unknown dimension {dim!r}")


def face_edge_from_vertices(X: VoxelComplex) -> SparseMatrix:
    """Unoriented face-edge incidence derived from vertex incidences.

    A face contains an edge exactly when it contains both of its end voxels.
    """
    if not len(X.face_ids):
        raise UnsupportedError("complex has no faces")
    prod = sparse.multiply(X.M_FV, sparse.transpose(sparse.abs(X.M_EV)))
    r, c, v = prod.entries()
    keep = v == 2
    return SparseMatrix.from_coo(r[keep], c[keep], 1.0, prod.shape)


def euler_characteristic(X: VoxelComplex, cells: bool = True) -> int:
    """Alternating cell count V - E + F (- C when cells are present and requested)."""
    n = X.counts
    chi = n["V"] - n["E"] + n["F"]
    if cells:
        chi -= n["C"]
    return int(chi)


def trilinear_interpolate(X: VoxelComplex, cell, f, local) -> float:
    """Blend the 8 corner values of ``cell`` at local coordinates in [0, 1]^3."""
    u = np.asarray(local, dtype=np.float64).reshape(3)
    if np.any(u < 0) or np.any(u > 1):
        raise RangeError("local coordinates must lie in [0, 1]^3")
    if int(cell) not in X.cell_ids:
        raise KeyError(f"unknown cell {cell}")
    corner = np.array([cell], dtype=np.uint64)
    idx = X.vertex_ids.index_strict(_cell_vertices(corner).reshape(-1))
    f = np.asarray(f, dtype=np.float64)
    total = 0.0
    for n, (i, j, k) in enumerate(_CUBE):
        w = (u[0] if i else 1 - u[0]) * (u[1] if j else 1 - u[1]) * (u[2] if k else 1 - u[2])
        total += w * f[idx[n]]
    return float(total)
