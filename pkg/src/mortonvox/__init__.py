"""Topological voxelization on Morton-indexed grids with sparse discrete calculus.

Typical pipeline::

    pts = sampling.sample_surface_mesh(mesh, None, sigma)
    cloud = voxelize.voxelate_point_cloud(pts, None, sigma)
    X = complex.construct(cloud, [stencil.standard("face6")])
    L = operators.laplacian(X)
"""
from . import complex, geometry, io, morton, operators, sampling, shapes, sparse, stencil, voxelize
from ._backend import BACKEND
from .errors import (BoundaryNotClosedError, FormatError, ParseError, RangeError,
                     UnsupportedError)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BoundaryNotClosedError", "FormatError", "ParseError", "RangeError",
    "UnsupportedError", "complex", "geometry", "io", "morton", "operators", "sampling",
    "shapes", "sparse", "stencil", "voxelize",
]
