"""Point -> voxel -> ioxel -> Morton code pipeline and the VoxelCloud type."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import morton
from .errors import RangeError
from .geometry import GridSpec, IDENTITY, as_sigma, round_half_up


def voxelate(p, sigma) -> np.ndarray:
    """Nearest voxel index of point(s) ``p``; works on (3,) or (n, 3)."""
    return round_half_up(np.asarray(p, dtype=np.float64) / as_sigma(sigma))


def poxelate(v, sigma) -> np.ndarray:
    """Centroid of voxel(s) ``v``."""
    return np.asarray(v, dtype=np.float64) * as_sigma(sigma)


def ioxelate(v, c) -> np.ndarray:
    """Shift voxel indices by the corner ``c`` into the first octant."""
    rho = np.asarray(v, dtype=np.int64) - np.asarray(c, dtype=np.int64)
    if np.any(rho < 0):
        raise RangeError("voxel lies below the grid corner")
    return rho


def deioxelate(rho, c) -> np.ndarray:
    return np.asarray(rho, dtype=np.int64) + np.asarray(c, dtype=np.int64)


@dataclass(frozen=True)
class VoxelCloud:
    """Sorted unique Morton codes plus the grid they live on."""

    codes: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=np.uint64).reshape(-1)
        if codes.size > 1 and not np.all(codes[1:] > codes[:-1]):
            raise ValueError("codes must be strictly increasing")
        object.__setattr__(self, "codes", codes)

    def __len__(self):
        return int(self.codes.size)

    @property
    def sigma(self) -> np.ndarray:
        return self.grid.sigma

    @property
    def corner(self) -> np.ndarray:
        return self.grid.min_corner

    @property
    def ioxels(self) -> np.ndarray:
        return morton.decode3_array(self.codes)

    @property
    def voxels(self) -> np.ndarray:
        return deioxelate(self.ioxels, self.corner)

    @property
    def centroids(self) -> np.ndarray:
        return poxelate(self.voxels, self.sigma)

    def __eq__(self, other):
        if not isinstance(other, VoxelCloud):
            return NotImplemented
        return np.array_equal(self.codes, other.codes) and self.grid == other.grid

    __hash__ = None

    @classmethod
    def from_voxels(cls, voxels, sigma, corner=None) -> "VoxelCloud":
        """Build a cloud from integer voxel indices."""
        v = np.asarray(voxels, dtype=np.int64).reshape(-1, 3)
        if len(v) == 0:
            raise ValueError("empty voxel set")
        c = v.min(axis=0) if corner is None else np.asarray(corner, dtype=np.int64)
        rho = ioxelate(v, c)
        codes = np.unique(morton.encode3_array(rho))
        dims = np.maximum(rho.max(axis=0) + 1, 1)
        return cls(codes, GridSpec(sigma, c, dims))


def voxelate_point_cloud(points, frame=None, sigma=1.0, corner=None) -> VoxelCloud:
    """Voxelize world-space points into a canonical VoxelCloud.

    Points are mapped into the frame, rounded to voxels, shifted by the
    corner (the cloud minimum unless given), encoded, sorted and deduplicated.
    """
    p = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(p) == 0:
        raise ValueError("empty point set")
    frame = IDENTITY if frame is None else frame
    v = voxelate(frame.to_local(p), sigma)
    return VoxelCloud.from_voxels(v, sigma, corner)
