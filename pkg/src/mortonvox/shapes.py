"""Analytic test meshes: icosphere, torus and axis-aligned box."""
from __future__ import annotations

import numpy as np

from .geometry import TriMesh

_PHI = (1 + 5 ** 0.5) / 2
_ICO_V = [(-1, _PHI, 0), (1, _PHI, 0), (-1, -_PHI, 0), (1, -_PHI, 0),
          (0, -1, _PHI), (0, 1, _PHI), (0, -1, -_PHI), (0, 1, -_PHI),
          (_PHI, 0, -1), (_PHI, 0, 1), (-_PHI, 0, -1), (-_PHI, 0, 1)]
_ICO_F = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
          (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
          (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
          (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]


def icosphere(subdivisions: int = 3, radius: float = 1.0, center=(0.0, 0.0, 0.0)) -> TriMesh:
    """Subdivided icosahedron projected onto a sphere (outward winding)."""
    verts = [np.array(v, dtype=np.float64) / np.linalg.norm(v) for v in _ICO_V]
    faces = list(_ICO_F)
    for _ in range(subdivisions):
        cache = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    v = np.array(verts) * radius + np.asarray(center, dtype=np.float64)
    return TriMesh(v, np.array(faces, dtype=np.int64))


def torus(R: float = 1.0, r: float = 0.4, nu: int = 48, nv: int = 24,
          center=(0.0, 0.0, 0.0)) -> TriMesh:
    """Ring torus around the z axis."""
    i, j = np.meshgrid(np.arange(nu), np.arange(nv), indexing="ij")
    a = 2 * np.pi * i.ravel() / nu
    b = 2 * np.pi * j.ravel() / nv
    v = np.stack([(R + r * np.cos(b)) * np.cos(a),
                  (R + r * np.cos(b)) * np.sin(a),
                  r * np.sin(b)], axis=1) + np.asarray(center, dtype=np.float64)
    i, j = i.ravel(), j.ravel()
    p = i * nv + j
    q = ((i + 1) % nu) * nv + j
    pp = i * nv + (j + 1) % nv
    qq = ((i + 1) % nu) * nv + (j + 1) % nv
    faces = np.concatenate([np.stack([p, q, qq], 1), np.stack([p, qq, pp], 1)])
    return TriMesh(v, faces)


# side quads ordered -x, +x, -y, +y, -z, +z (corner index = 4i + 2j + k)
_BOX_QUADS = [(0, 1, 3, 2), (4, 6, 7, 5), (0, 4, 5, 1), (2, 3, 7, 6), (0, 2, 6, 4), (1, 5, 7, 3)]


def box(lo=(0.0, 0.0, 0.0), hi=(1.0, 1.0, 1.0), open_face: int | None = None) -> TriMesh:
    """Axis-aligned box as 12 outward-wound triangles.

    ``open_face`` (0..5, ordered -x, +x, -y, +y, -z, +z) drops one side,
    leaving a boundary with a hole.
    """
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    corners = np.array([[hi[0] if i else lo[0], hi[1] if j else lo[1], hi[2] if k else lo[2]]
                        for i in (0, 1) for j in (0, 1) for k in (0, 1)])
    quads = list(_BOX_QUADS)
    if open_face is not None:
        del quads[int(open_face)]
    faces = [(a, b, c) for a, b, c, d in quads] + [(a, c, d) for a, b, c, d in quads]
    return TriMesh(corners, np.array(faces, dtype=np.int64))
