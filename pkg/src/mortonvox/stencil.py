"""Stencils: relative voxel offsets plus hyper-edges over them.

A stencil lists a condition set of relative offsets (the anchor ``(0,0,0)``
first) and hyper-edges given as index tuples into it: pairs are edges,
4-tuples square faces and 8-tuples cube cells. Compiling attaches Morton
forms of the offsets so that neighbours can be found by code arithmetic.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import morton

KINDS = ("face6", "edge18", "vertex26", "squareYZ", "squareZX", "squareXY", "cube8")
FACE_TAGS = ("YZ", "ZX", "XY")  # tag = index of the face normal axis


@dataclass(frozen=True)
class Stencil:
    cond: np.ndarray                 # (k, 3) relative offsets, cond[0] == 0
    hyper_edges: tuple               # index tuples into cond
    cond_codes: tuple                # signed Morton code per offset
    edge_codes: tuple                # 6D code per 2-tuple, in order
    name: str = ""

    @property
    def edges(self) -> list:
        return [e for e in self.hyper_edges if len(e) == 2]

    @property
    def faces(self) -> list:
        return [e for e in self.hyper_edges if len(e) == 4]

    @property
    def cells(self) -> list:
        return [e for e in self.hyper_edges if len(e) == 8]

    def face_frames(self):
        """(corner offset, normal axis) of every 4-tuple."""
        out = []
        for f in self.faces:
            pts = self.cond[list(f)]
            normal = int(np.flatnonzero(np.all(pts == pts[0], axis=0))[0])
            out.append((pts.min(axis=0), normal))
        return out

    def cell_corners(self):
        return [self.cond[list(c)].min(axis=0) for c in self.cells]

    @property
    def degree(self) -> int:
        """Number of distinct neighbours joined to the anchor by an edge."""
        nb = set()
        for i, j in self.edges:
            if i == 0:
                nb.add(j)
            elif j == 0:
                nb.add(i)
        return len(nb)


def _check_square(pts):
    flat = np.all(pts == pts[0], axis=0)
    if flat.sum() != 1:
        return False
    rel = pts - pts.min(axis=0)
    return (rel.max() == 1 and len({tuple(p) for p in rel}) == 4)


def _check_cube(pts):
    rel = pts - pts.min(axis=0)
    return rel.max() == 1 and len({tuple(p) for p in rel}) == 8


def compile(cond, hyper_edges, name: str = "") -> Stencil:  # noqa: A001
    """Validate a stencil and attach its Morton codes.

    Offsets may be negative; they are stored as per-axis two's complement.
    Edge codes keep tuple order (source first).
    """
    cond = np.asarray(cond, dtype=np.int64).reshape(-1, 3)
    if len(cond) == 0 or np.any(cond[0] != 0):
        raise ValueError("the first condition entry must be the anchor (0, 0, 0)")
    if len({tuple(c) for c in cond}) != len(cond):
        raise ValueError("duplicate offsets in condition set")
    edges = []
    for he in hyper_edges:
        he = tuple(int(i) for i in he)
        if len(he) not in (2, 4, 8):
            raise ValueError(f"hyper-edge {he} must have 2, 4 or 8 entries")
        if min(he) < 0 or max(he) >= len(cond):
            raise ValueError(f"hyper-edge {he} indexes outside the condition set")
        if len(set(he)) != len(he):
            raise ValueError(f"hyper-edge {he} repeats an index")
        pts = cond[list(he)]
        if len(he) == 4 and not _check_square(pts):
            raise ValueError(f"4-tuple {he} is not a unit axis-aligned square")
        if len(he) == 8 and not _check_cube(pts):
            raise ValueError(f"8-tuple {he} is not a unit cube")
        edges.append(he)
    cond_codes = tuple(morton.encode_offset3(c) for c in cond)
    edge_codes = tuple(morton.encode_offset6(cond[i], cond[j]) for i, j in
                       (e for e in edges if len(e) == 2))
    return Stencil(cond, tuple(edges), cond_codes, edge_codes, name)


def _star(offsets, name):
    cond = [(0, 0, 0)] + [tuple(o) for o in offsets]
    return compile(cond, [(0, i) for i in range(1, len(cond))], name)


def _neighbours(max_nonzero):
    out = []
    for d in itertools.product((-1, 0, 1), repeat=3):
        nz = sum(x != 0 for x in d)
        if 0 < nz <= max_nonzero:
            out.append(d)
    # axis neighbours first, then by Manhattan length
    return sorted(out, key=lambda d: (sum(x != 0 for x in d), [-x for x in d]))


def standard(kind: str) -> Stencil:
    """Canned stencils.

    ``face6``, ``edge18`` and ``vertex26`` join the anchor to every voxel
    sharing a face, an edge or a vertex with it. ``squareYZ``/``ZX``/``XY``
    hold one unit square with the named plane, ``cube8`` one unit cube.
    ``edge18`` is an extension beyond the two classic neighbourhoods.
    """
    if kind == "face6":
        return _star(_neighbours(1), kind)
    if kind == "edge18":
        return _star(_neighbours(2), kind)
    if kind == "vertex26":
        return _star(_neighbours(3), kind)
    if kind in ("squareYZ", "squareZX", "squareXY"):
        a = ("squareYZ", "squareZX", "squareXY").index(kind)
        b, c = (a + 1) % 3, (a + 2) % 3
        eb = np.eye(3, dtype=np.int64)[b]
        ec = np.eye(3, dtype=np.int64)[c]
        cond = [0 * eb, eb, eb + ec, ec]
        return compile(cond, [(0, 1, 2, 3)], kind)
    if kind == "cube8":
        cond = list(itertools.product((0, 1), repeat=3))
        return compile(cond, [tuple(range(8))], kind)
    raise ValueError(f"unknown stencil kind {kind!r}; choose from {KINDS}")
