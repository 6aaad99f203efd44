"""Geometric primitives, grid bounds and the closed-form line/plane solver."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PARALLEL_EPS = 1e-12


def round_half_up(x):
    """Componentwise nearest integer with ties sent towards +inf.

    The rule is translation invariant, so points on a voxel boundary always
    fall into the same neighbour regardless of the sign of the coordinate.
    """
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5).astype(np.int64)


def as_sigma(sigma) -> np.ndarray:
    s = np.asarray(sigma, dtype=np.float64).reshape(-1)
    if s.size == 1:
        s = np.repeat(s, 3)
    if s.size != 3 or not np.all(np.isfinite(s)) or np.any(s <= 0):
        raise ValueError(f"sigma must be one or three positive values, got {sigma!r}")
    return s


@dataclass(frozen=True)
class Frame:
    """Oriented plane used as a rigid pre-transform into grid space.

    The local axes are ``u``, the in-plane direction orthogonal to ``u``,
    and the plane normal.
    """

    origin: np.ndarray = field(default_factory=lambda: np.zeros(3))
    u_axis: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0]))
    v_axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0, 0.0]))

    def __post_init__(self):
        for name in ("origin", "u_axis", "v_axis"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        if np.linalg.norm(np.cross(self.u_axis, self.v_axis)) == 0:
            raise ValueError("frame axes are parallel")

    @property
    def basis(self) -> np.ndarray:
        """Rows are the orthonormal local axes."""
        e1 = self.u_axis / np.linalg.norm(self.u_axis)
        e3 = np.cross(self.u_axis, self.v_axis)
        e3 /= np.linalg.norm(e3)
        return np.stack([e1, np.cross(e3, e1), e3])

    @property
    def is_identity(self) -> bool:
        return bool(np.all(self.origin == 0) and np.array_equal(self.basis, np.eye(3)))

    def to_local(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=np.float64)
        if self.is_identity:
            return p
        return (p - self.origin) @ self.basis.T

    def to_world(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=np.float64)
        if self.is_identity:
            return p
        return p @ self.basis + self.origin


IDENTITY = Frame()


def _frame(frame):
    return IDENTITY if frame is None else frame


@dataclass(frozen=True)
class LineSet:
    vertices: np.ndarray
    segments: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        s = np.asarray(self.segments, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "segments", s)
        if s.size and (s.min() < 0 or s.max() >= len(v)):
            raise ValueError("segment index out of range")
        if s.size and np.any(np.all(v[s[:, 0]] == v[s[:, 1]], axis=1)):
            raise ValueError("zero-length segment")


@dataclass(frozen=True)
class TriMesh:
    vertices: np.ndarray
    faces: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        f = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)
        if f.size and (f.min() < 0 or f.max() >= len(v)):
            raise ValueError("face index out of range")

    @property
    def triangles(self) -> np.ndarray:
        return self.vertices[self.faces]

    def validated(self) -> "TriMesh":
        """Copy without zero-area triangles."""
        t = self.triangles
        area2 = np.linalg.norm(np.cross(t[:, 1] - t[:, 0], t[:, 2] - t[:, 0]), axis=1)
        return TriMesh(self.vertices, self.faces[area2 > 0])


@dataclass(frozen=True)
class GridSpec:
    """Voxel size, integer minimum corner and extent of a grid."""

    sigma: np.ndarray
    min_corner: np.ndarray
    dims: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", as_sigma(self.sigma))
        object.__setattr__(self, "min_corner", np.asarray(self.min_corner, dtype=np.int64).reshape(3))
        object.__setattr__(self, "dims", np.asarray(self.dims, dtype=np.int64).reshape(3))
        if np.any(self.dims < 1):
            raise ValueError("grid dims must be >= 1")

    def __eq__(self, other):
        if not isinstance(other, GridSpec):
            return NotImplemented
        return (np.array_equal(self.sigma, other.sigma)
                and np.array_equal(self.min_corner, other.min_corner)
                and np.array_equal(self.dims, other.dims))


def bounding_grid(geometry, sigma, frame=None) -> GridSpec:
    """Grid covering the rounded bounding box of ``geometry``.

    ``geometry`` is a LineSet, TriMesh or an (n, 3) point array. Flat axes
    are padded to one voxel.
    """
    sigma = as_sigma(sigma)
    pts = geometry.vertices if hasattr(geometry, "vertices") else geometry
    pts = np.asarray(pts, dtype=np.float64).reshape(-1, 3)
    if len(pts) == 0:
        raise ValueError("empty geometry")
    pts = _frame(frame).to_local(pts)
    b0 = round_half_up(pts.min(axis=0) / sigma)
    b1 = round_half_up(pts.max(axis=0) / sigma)
    return GridSpec(sigma, b0, np.maximum(b1 - b0, 1))


def intersect_ray_parallelogram(p, d, c, u, v, eps=None):
    """Intersect segment ``p + r d`` with parallelogram ``c + s u + t v``.

    Returns ``(r, s, t)`` with every parameter in ``[0, 1]``, or None for
    parallel input or a miss. ``eps`` defaults to a threshold relative to
    the input scale.
    """
    p, d, c, u, v = (np.asarray(a, dtype=np.float64) for a in (p, d, c, u, v))
    w = np.cross(u, v)
    delta = -float(d @ w)
    if eps is None:
        eps = PARALLEL_EPS * max(np.linalg.norm(d), np.linalg.norm(u), np.linalg.norm(v)) ** 3
    if abs(delta) <= eps:
        return None
    b = p - c
    e = np.cross(d, b)
    r = float(b @ w) / delta
    s = -float(e @ v) / delta
    t = float(e @ u) / delta
    if not (0.0 <= r <= 1.0 and 0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
        return None
    return r, s, t
