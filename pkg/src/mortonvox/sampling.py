"""Topological sampling of line networks, triangle surfaces and closed solids.

All three samplers intersect the input with regular families of axis-aligned
planes or rays laid out on the voxel grid and return world-space points whose
voxelization keeps the connectivity of the input.

``mode="conservative"`` anchors planes and rays on voxel boundaries and, by
default, straddles each hit into the voxels that share the crossed boundary.
``mode="thin"`` anchors them on voxel centroids.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import BoundaryNotClosedError
from .geometry import IDENTITY, GridSpec, LineSet, TriMesh, bounding_grid

MODES = ("conservative", "thin")
PARAM_TOL = 1e-12
DEDUPE_TOL = 1e-10


@dataclass
class SamplingStats:
    grid: GridSpec
    rays: int = 0       # rays (or planes) cast, one batched solve each
    tests: int = 0      # primitive/ray candidate pairs actually solved
    hits: int = 0       # accepted intersections after dedupe
    points: int = 0     # unique output points


@dataclass
class RayHits:
    """Accepted hits of one axis family of rays, after shared-edge dedupe."""

    axis: int
    k0: np.ndarray
    k1: np.ndarray
    r: np.ndarray
    tri: np.ndarray
    sign: np.ndarray
    start: float
    length: float
    rays: int
    tests: int

    @property
    def z(self) -> np.ndarray:
        """Hit coordinate along the ray axis."""
        return self.start + self.r * self.length


def _offset(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return -0.5 if mode == "conservative" else 0.0


def _finish(points, frame, stats, return_stats):
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    pts = np.unique(frame.to_world(pts), axis=0)
    stats.points = len(pts)
    return (pts, stats) if return_stats else pts


def _expand(lo, hi):
    """Flatten integer ranges [lo, hi] into (owner, value) pairs."""
    counts = np.maximum(hi - lo + 1, 0)
    owner = np.repeat(np.arange(lo.size), counts)
    start = np.cumsum(counts) - counts
    value = lo[owner] + np.arange(counts.sum()) - start[owner]
    return owner, value


def solve_batch(p, d, c, u, v):
    """Closed-form ``p + r d = c + s u + t v`` for many rows at once.

    Returns ``(r, s, t, delta)``; rows with ``delta == 0`` give inf/nan.
    """
    w = np.cross(u, v)
    delta = -np.einsum("ij,ij->i", d, w)
    b = p - c
    e = np.cross(d, b)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.einsum("ij,ij->i", b, w) / delta
        s = -np.einsum("ij,ij->i", e, v) / delta
        t = np.einsum("ij,ij->i", e, u) / delta
    return r, s, t, delta


def sample_line_network(lines: LineSet, frame=None, sigma=1.0, mode="conservative",
                        endpoints=True, straddle=None, return_stats=False):
    """Sample a line network where it crosses the grid's plane families.

    Every segment endpoint is emitted as well unless ``endpoints=False``.
    """
    frame = IDENTITY if frame is None else frame
    off = _offset(mode)
    straddle = (mode == "conservative") if straddle is None else straddle
    grid = bounding_grid(lines, sigma, frame)
    sig, b0, dims = grid.sigma, grid.min_corner, grid.dims
    stats = SamplingStats(grid)
    verts = frame.to_local(lines.vertices)
    p0 = verts[lines.segments[:, 0]]
    dv = verts[lines.segments[:, 1]] - p0
    out = [p0, p0 + dv] if endpoints else []

    k_first = 1 if mode == "conservative" else 0
    for n in range(3):
        ar, af = (n + 1) % 3, (n + 2) % 3
        planes = dims[n] + 1 - k_first
        stats.rays += int(planes)
        lo = np.minimum(p0[:, n], p0[:, n] + dv[:, n]) / sig[n] - b0[n] - off
        hi = np.maximum(p0[:, n], p0[:, n] + dv[:, n]) / sig[n] - b0[n] - off
        k_lo = np.maximum(np.ceil(lo - PARAM_TOL).astype(np.int64), k_first)
        k_hi = np.minimum(np.floor(hi + PARAM_TOL).astype(np.int64), dims[n])
        seg, k = _expand(k_lo, k_hi)
        stats.tests += int(seg.size)
        if seg.size == 0:
            continue
        c = np.empty((seg.size, 3))
        c[:, n] = (b0[n] + k + off) * sig[n]
        c[:, ar] = (b0[ar] - 0.5) * sig[ar]
        c[:, af] = (b0[af] - 0.5) * sig[af]
        u = np.zeros((seg.size, 3))
        v = np.zeros((seg.size, 3))
        u[:, ar] = (dims[ar] + 1) * sig[ar]
        v[:, af] = (dims[af] + 1) * sig[af]
        d = dv[seg]
        r, s, t, delta = solve_batch(p0[seg], d, c, u, v)
        scale = np.linalg.norm(d, axis=1) * u[:, ar] * v[:, af]
        ok = ((np.abs(delta) > 1e-12 * scale) & (r >= -PARAM_TOL) & (r <= 1 + PARAM_TOL)
              & (s >= 0) & (s <= 1) & (t >= 0) & (t <= 1))
        q = p0[seg[ok]] + r[ok, None] * d[ok]
        q[:, n] = c[ok, n]
        stats.hits += int(ok.sum())
        out.append(q)
        if straddle:
            for h in (-0.5, 0.5):
                qq = q.copy()
                qq[:, n] += h * sig[n]
                out.append(qq)
    return _finish(np.concatenate(out) if out else np.empty((0, 3)), frame, stats, return_stats)


def _dedupe(k0, k1, r, tri, sign, use_sign):
    """Collapse hits on the same ray at the same parameter.

    The hit of the lowest-indexed triangle survives. With ``use_sign`` only
    hits of equal orientation are merged, so a ray grazing a silhouette edge
    keeps one entry and one exit.
    """
    if r.size == 0:
        return np.arange(0)
    sg = sign if use_sign else np.zeros_like(sign)
    order = np.lexsort((tri, r, sg, k1, k0))
    k0s, k1s, rs, sgs = k0[order], k1[order], r[order], sg[order]
    new = np.ones(order.size, dtype=bool)
    new[1:] = ((k0s[1:] != k0s[:-1]) | (k1s[1:] != k1s[:-1]) | (sgs[1:] != sgs[:-1])
               | (rs[1:] - rs[:-1] > DEDUPE_TOL))
    gid = np.cumsum(new) - 1
    o2 = np.lexsort((tri[order], gid))
    first = np.ones(o2.size, dtype=bool)
    first[1:] = gid[o2][1:] != gid[o2][:-1]
    return np.sort(order[o2[first]])


def cast_family(triangles, grid: GridSpec, axis: int, mode="conservative",
                use_sign=False) -> RayHits:
    """Cast all rays parallel to ``axis`` through the grid against triangles.

    Rays sit on the anchor lattice of ``mode`` in the two other axes and
    span the grid plus half a voxel on each side along ``axis``.
    """
    off = _offset(mode)
    sig, b0, dims = grid.sigma, grid.min_corner, grid.dims
    ar, af = (axis + 1) % 3, (axis + 2) % 3
    n_r, n_f = int(dims[ar] + 1), int(dims[af] + 1)
    start = (b0[axis] - 0.5) * sig[axis]
    length = (dims[axis] + 1) * sig[axis]
    tri, k0, k1, r, s, t, sign, tests = kernels.cast_rays(
        np.ascontiguousarray(triangles, dtype=np.float64), axis,
        float((b0[ar] + off) * sig[ar]), float(sig[ar]), n_r,
        float((b0[af] + off) * sig[af]), float(sig[af]), n_f,
        float(start), float(length), PARAM_TOL)
    keep = _dedupe(k0, k1, r, tri, sign, use_sign)
    return RayHits(axis, k0[keep], k1[keep], r[keep], tri[keep], sign[keep],
                   float(start), float(length), n_r * n_f, int(tests))


def _anchor_coords(h: RayHits, grid, off):
    ar, af = (h.axis + 1) % 3, (h.axis + 2) % 3
    q = np.empty((h.r.size, 3))
    q[:, h.axis] = h.z
    q[:, ar] = (grid.min_corner[ar] + h.k0 + off) * grid.sigma[ar]
    q[:, af] = (grid.min_corner[af] + h.k1 + off) * grid.sigma[af]
    return q


def sample_surface_mesh(mesh: TriMesh, frame=None, sigma=1.0, mode="conservative",
                        straddle=None, return_stats=False):
    """Sample a triangle surface with three families of axis-parallel rays."""
    frame = IDENTITY if frame is None else frame
    off = _offset(mode)
    straddle = (mode == "conservative") if straddle is None else straddle
    grid = bounding_grid(mesh, sigma, frame)
    stats = SamplingStats(grid)
    tris = frame.to_local(mesh.triangles)
    out = []
    for m in range(3):
        h = cast_family(tris, grid, m, mode)
        stats.rays += h.rays
        stats.tests += h.tests
        stats.hits += h.r.size
        q = _anchor_coords(h, grid, off)
        if not straddle:
            out.append(q)
            continue
        ar, af = (m + 1) % 3, (m + 2) % 3
        for da in (-0.5, 0.5):
            for db in (-0.5, 0.5):
                qq = q.copy()
                qq[:, ar] += da * grid.sigma[ar]
                qq[:, af] += db * grid.sigma[af]
                out.append(qq)
    return _finish(np.concatenate(out), frame, stats, return_stats)


def _ray_intervals(h: RayHits, n_f: int):
    """Sort hits per ray and pair them into (entry, exit) intervals."""
    ray = h.k0 * n_f + h.k1
    z = h.z
    order = np.lexsort((z, ray))
    ray, z = ray[order], z[order]
    uniq, start, counts = np.unique(ray, return_index=True, return_counts=True)
    if np.any(counts % 2):
        raise BoundaryNotClosedError()
    return ray[0::2], z[0::2], z[1::2]


def sample_volume_mesh(boundary: TriMesh, frame=None, sigma=1.0, mode="conservative",
                       return_stats=False):
    """Sample the solid enclosed by a closed triangle surface.

    Along each ray a station is inside when an odd number of hits lies
    strictly before it. Each inside station emits the centroid of the voxel
    it belongs to.
    """
    frame = IDENTITY if frame is None else frame
    off = _offset(mode)
    grid = bounding_grid(boundary, sigma, frame)
    sig, b0, dims = grid.sigma, grid.min_corner, grid.dims
    stats = SamplingStats(grid)
    tris = frame.to_local(boundary.triangles)
    out = []
    for m in range(3):
        ar, af = (m + 1) % 3, (m + 2) % 3
        h = cast_family(tris, grid, m, mode, use_sign=True)
        stats.rays += h.rays
        stats.tests += h.tests
        stats.hits += h.r.size
        if h.r.size == 0:
            continue
        n_f = int(dims[af] + 1)
        ray, za, zb = _ray_intervals(h, n_f)
        origin = (b0[m] + off) * sig[m]
        lo = np.maximum(np.floor((za - origin) / sig[m]).astype(np.int64), 0)
        hi = np.minimum(np.floor((zb - origin) / sig[m]).astype(np.int64) + 1, dims[m])
        iv, k = _expand(lo, hi)
        zk = origin + k * sig[m]
        inside = (zk > za[iv]) & (zk <= zb[iv])
        iv, k = iv[inside], k[inside]
        q = np.empty((k.size, 3))
        q[:, m] = (b0[m] + k) * sig[m]
        q[:, ar] = (b0[ar] + ray[iv] // n_f) * sig[ar]
        q[:, af] = (b0[af] + ray[iv] % n_f) * sig[af]
        out.append(q)
    pts = np.concatenate(out) if out else np.empty((0, 3))
    return _finish(pts, frame, stats, return_stats)
