"""Readers and writers: OBJ geometry, voxel clouds, matrices, fields, stencils.

Writers are deterministic: rows are emitted in global-ID order and floats use
their shortest round-trip representation.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import morton
from .errors import FormatError, ParseError
from .geometry import GridSpec, LineSet, TriMesh
from .sparse import SparseMatrix
from .stencil import Stencil, compile as compile_stencil
from .voxelize import VoxelCloud

MM_HEADER = "%%MatrixMarket matrix coordinate real general"
CLOUD_HEADER = "iota,i,j,k,x,y,z"


def _f(x) -> str:
    return repr(float(x))


def _vec(v) -> str:
    return ",".join(_f(x) for x in v)


# OBJ ------------------------------------------------------------------------

@dataclass
class ObjData:
    mesh: TriMesh | None
    lines: LineSet | None


def _obj_index(tok, n, lineno):
    try:
        i = int(tok.split("/")[0])
    except ValueError:
        raise ParseError(f"bad vertex index {tok!r}", lineno) from None
    if i > 0:
        i -= 1
    elif i < 0:
        i += n
    else:
        raise ParseError("vertex index 0 is not valid", lineno)
    if not 0 <= i < n:
        raise ParseError(f"vertex index {tok} out of range", lineno)
    return i


def read_obj(path) -> ObjData:
    """Parse ``v``, ``f`` and ``l`` records; polygons are fanned into triangles.

    Other record types (``vt``, ``vn``, ``o``, ``usemtl``, ...) are ignored.
    """
    verts, faces, segs = [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tok = line.split()
            if tok[0] == "v":
                if len(tok) < 4:
                    raise ParseError("vertex needs 3 coordinates", lineno)
                try:
                    verts.append([float(x) for x in tok[1:4]])
                except ValueError:
                    raise ParseError(f"bad vertex {line!r}", lineno) from None
            elif tok[0] == "f":
                if len(tok) < 4:
                    raise ParseError("face needs at least 3 vertices", lineno)
                idx = [_obj_index(t, len(verts), lineno) for t in tok[1:]]
                faces.extend((idx[0], idx[k], idx[k + 1]) for k in range(1, len(idx) - 1))
            elif tok[0] == "l":
                if len(tok) < 3:
                    raise ParseError("line needs at least 2 vertices", lineno)
                idx = [_obj_index(t, len(verts), lineno) for t in tok[1:]]
                segs.extend(zip(idx[:-1], idx[1:]))
    if not faces and not segs:
        raise ParseError("no faces or lines found")
    mesh = TriMesh(np.array(verts), np.array(faces, dtype=np.int64)) if faces else None
    lines = LineSet(np.array(verts), np.array(segs, dtype=np.int64)) if segs else None
    return ObjData(mesh, lines)


def write_obj(path, mesh: TriMesh | None = None, lines: LineSet | None = None):
    verts = mesh.vertices if mesh is not None else lines.vertices
    with open(path, "w") as fh:
        for v in verts:
            fh.write(f"v {_f(v[0])} {_f(v[1])} {_f(v[2])}\n")
        if mesh is not None:
            for a, b, c in mesh.faces + 1:
                fh.write(f"f {a} {b} {c}\n")
        if lines is not None:
            for a, b in lines.segments + 1:
                fh.write(f"l {a} {b}\n")


# points ---------------------------------------------------------------------

def write_points(points, path):
    with open(path, "w") as fh:
        fh.write("x,y,z\n")
        for p in np.asarray(points).reshape(-1, 3):
            fh.write(_vec(p) + "\n")


def read_points(path) -> np.ndarray:
    with open(path) as fh:
        rows = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not rows or rows[0] != "x,y,z":
        raise FormatError("points file must start with header 'x,y,z'")
    try:
        return np.array([[float(x) for x in r.split(",")] for r in rows[1:]],
                        dtype=np.float64).reshape(-1, 3)
    except ValueError as exc:
        raise FormatError(f"bad point row: {exc}") from None


# voxel clouds ---------------------------------------------------------------

def write_voxel_cloud(cloud: VoxelCloud, path):
    rho = cloud.ioxels
    cen = cloud.centroids
    with open(path, "w") as fh:
        fh.write(f"# sigma={_vec(cloud.sigma)}\n")
        fh.write(f"# corner={','.join(str(int(c)) for c in cloud.corner)}\n")
        fh.write(f"# dims={','.join(str(int(c)) for c in cloud.grid.dims)}\n")
        fh.write(CLOUD_HEADER + "\n")
        for code, r, c in zip(cloud.codes, rho, cen):
            fh.write(f"{int(code)},{r[0]},{r[1]},{r[2]},{_vec(c)}\n")


def read_voxel_cloud(path) -> VoxelCloud:
    meta, rows = {}, []
    header_seen = False
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "=" in line:
                    k, v = line[1:].split("=", 1)
                    meta[k.strip()] = v.strip()
                continue
            if not header_seen:
                if line != CLOUD_HEADER:
                    raise FormatError(f"expected header {CLOUD_HEADER!r}, got {line!r}")
                header_seen = True
                continue
            rows.append(line.split(","))
    if "sigma" not in meta or "corner" not in meta:
        raise FormatError("missing '# sigma=' or '# corner=' comment")
    if not header_seen or not rows:
        raise FormatError("voxel cloud has no rows")
    try:
        sigma = np.array([float(x) for x in meta["sigma"].split(",")])
        corner = np.array([int(x) for x in meta["corner"].split(",")])
        codes = np.array([int(r[0]) for r in rows], dtype=np.uint64)
        rho = np.array([[int(x) for x in r[1:4]] for r in rows], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise FormatError(f"bad voxel cloud row: {exc}") from None
    if not np.array_equal(morton.encode3_array(rho), codes):
        raise FormatError("Morton codes do not match ioxel indices")
    if codes.size > 1 and not np.all(codes[1:] > codes[:-1]):
        raise FormatError("codes are not strictly increasing")
    dims = (np.array([int(x) for x in meta["dims"].split(",")]) if "dims" in meta
            else rho.max(axis=0) + 1)
    return VoxelCloud(codes, GridSpec(sigma, corner, dims))


# matrices and fields --------------------------------------------------------

def write_matrix(A: SparseMatrix, path):
    """MatrixMarket coordinate file, 1-based, rows in canonical order."""
    r, c, v = A.entries()
    with open(path, "w") as fh:
        fh.write(MM_HEADER + "\n")
        fh.write(f"{A.rows} {A.cols} {A.nnz}\n")
        for i, j, x in zip(r, c, v):
            fh.write(f"{i + 1} {j + 1} {x:.17g}\n")


def read_matrix(path) -> SparseMatrix:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != MM_HEADER:
        raise FormatError(f"expected header {MM_HEADER!r}")
    body = [ln for ln in lines[1:] if ln.strip() and not ln.startswith("%")]
    try:
        n, m, nnz = (int(x) for x in body[0].split())
        ent = [ln.split() for ln in body[1:]]
        rows = np.array([int(e[0]) - 1 for e in ent], dtype=np.int64)
        cols = np.array([int(e[1]) - 1 for e in ent], dtype=np.int64)
        vals = np.array([float(e[2]) for e in ent])
    except (ValueError, IndexError) as exc:
        raise FormatError(f"bad MatrixMarket body: {exc}") from None
    if len(ent) != nnz:
        raise FormatError(f"declared {nnz} entries, found {len(ent)}")
    return SparseMatrix.from_coo(rows, cols, vals, (n, m))


def write_field(ids, values, path):
    """CSV ``id,value`` sorted by id."""
    ids = np.asarray(ids, dtype=np.uint64).reshape(-1)
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    order = np.argsort(ids, kind="stable")
    with open(path, "w") as fh:
        fh.write("id,value\n")
        for i in order:
            fh.write(f"{int(ids[i])},{_f(values[i])}\n")


def read_field(path):
    with open(path) as fh:
        rows = [ln.strip() for ln in fh if ln.strip()]
    if not rows or rows[0] != "id,value":
        raise FormatError("field file must start with header 'id,value'")
    try:
        ids = np.array([int(r.split(",")[0]) for r in rows[1:]], dtype=np.uint64)
        vals = np.array([float(r.split(",")[1]) for r in rows[1:]])
    except (ValueError, IndexError) as exc:
        raise FormatError(f"bad field row: {exc}") from None
    return ids, vals


def write_table(path, header, columns):
    """Generic integer/float CSV table."""
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(str(int(x)) if isinstance(x, (int, np.integer)) else _f(x)
                              for x in row) + "\n")


def read_table(path, header):
    with open(path) as fh:
        rows = [ln.strip() for ln in fh if ln.strip()]
    if not rows or rows[0] != ",".join(header):
        raise FormatError(f"expected header {','.join(header)!r} in {os.fspath(path)}")
    return [r.split(",") for r in rows[1:]]


# stencils -------------------------------------------------------------------

_ARITY = {"edge": 2, "face": 4, "cell": 8}


def parse_stencil(text: str, name: str = "") -> Stencil:
    """Parse ``rel i j k`` / ``edge a b`` / ``face a b c d`` / ``cell a..h`` lines."""
    cond, hyper = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            vals = [int(x) for x in tok[1:]]
        except ValueError:
            raise ParseError(f"non-integer in {line!r}", lineno) from None
        if tok[0] == "rel":
            if hyper:
                raise ParseError("'rel' lines must precede hyper-edges", lineno)
            if len(vals) != 3:
                raise ParseError("'rel' needs 3 integers", lineno)
            cond.append(vals)
        elif tok[0] in _ARITY:
            if len(vals) != _ARITY[tok[0]]:
                raise ParseError(f"'{tok[0]}' needs {_ARITY[tok[0]]} indices", lineno)
            hyper.append(tuple(vals))
        else:
            raise ParseError(f"unknown record {tok[0]!r}", lineno)
    if not cond:
        raise ParseError("stencil has no 'rel' lines")
    try:
        return compile_stencil(cond, hyper, name)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_stencil(path) -> Stencil:
    with open(path) as fh:
        return parse_stencil(fh.read(), os.path.basename(os.fspath(path)))


def format_stencil(st: Stencil) -> str:
    out = [f"rel {a} {b} {c}" for a, b, c in st.cond]
    kinds = {2: "edge", 4: "face", 8: "cell"}
    out += [f"{kinds[len(h)]} " + " ".join(str(i) for i in h) for h in st.hyper_edges]
    return "\n".join(out) + "\n"
