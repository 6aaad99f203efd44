"""Morton (Z-order) codes and carry-correct addition of interleaved indices.

Bit layout of a 3D code: the last coordinate occupies bit 0, so
``encode3((0, 0, 1)) == 0b001`` and ``encode3((0, 1, 0)) == 0b010``.
A 6D edge code interleaves a source code (even bits) with a destination code
(odd bits).

Scalar functions work on Python ints and raise :class:`RangeError` on
overflow. The ``*_array`` variants operate on numpy arrays through the
selected kernel backend.
"""
from __future__ import annotations

import numpy as np

from ._backend import kernels
from .errors import RangeError

AXIS_BITS3 = 21
AXIS_BITS6 = 10
WIDTH3 = 3 * AXIS_BITS3
WIDTH6 = 6 * AXIS_BITS6
MAX_CODE6_SOURCE = 1 << (3 * AXIS_BITS6)

MASKS3 = kernels.class_masks(WIDTH3, 3)
MASKS6 = kernels.class_masks(WIDTH6, 6)

_EVEN = int("01" * 32, 2)
_ODD = _EVEN << 1


def _check_triple(rho, bits):
    rho = tuple(int(x) for x in rho)
    if len(rho) != 3:
        raise ValueError("expected an integer triple")
    for x in rho:
        if x < 0 or x >= (1 << bits):
            raise RangeError(f"component {x} outside [0, 2^{bits})")
    return rho


def _masked_add(a: int, b: int, width: int, masks) -> tuple[int, int]:
    full = (1 << width) - 1
    out = 0
    carry = 0
    for j, m in enumerate(masks):
        t = (a | (full ^ m)) + (b & m)
        out |= t & m
        carry |= ((t >> width) & 1) << j
    return out, carry


def encode3(rho) -> int:
    """Interleave a nonnegative integer triple into a 63-bit code."""
    r0, r1, r2 = _check_triple(rho, AXIS_BITS3)
    code = 0
    for k in range(AXIS_BITS3):
        code |= ((r2 >> k) & 1) << (3 * k)
        code |= ((r1 >> k) & 1) << (3 * k + 1)
        code |= ((r0 >> k) & 1) << (3 * k + 2)
    return code


def decode3(code: int) -> tuple[int, int, int]:
    code = int(code)
    if code < 0 or code >= (1 << WIDTH3):
        raise RangeError(f"code {code} outside the 63-bit range")
    r = [0, 0, 0]
    for k in range(AXIS_BITS3):
        r[2] |= ((code >> (3 * k)) & 1) << k
        r[1] |= ((code >> (3 * k + 1)) & 1) << k
        r[0] |= ((code >> (3 * k + 2)) & 1) << k
    return r[0], r[1], r[2]


def interleave2(src: int, dst: int) -> int:
    """Edge code: ``src`` bits at even positions, ``dst`` bits at odd ones."""
    src, dst = int(src), int(dst)
    for c in (src, dst):
        if c < 0 or c >= MAX_CODE6_SOURCE:
            raise RangeError(f"code {c} exceeds 10 bits per axis")
    eps = 0
    for k in range(3 * AXIS_BITS6):
        eps |= ((src >> k) & 1) << (2 * k)
        eps |= ((dst >> k) & 1) << (2 * k + 1)
    return eps


def deinterleave2(eps: int) -> tuple[int, int]:
    eps = int(eps)
    if eps < 0 or eps >= (1 << WIDTH6):
        raise RangeError(f"edge code {eps} outside the 60-bit range")
    src = dst = 0
    for k in range(3 * AXIS_BITS6):
        src |= ((eps >> (2 * k)) & 1) << k
        dst |= ((eps >> (2 * k + 1)) & 1) << k
    return src, dst


def morton_sum3(a: int, b: int) -> int:
    """Add two 3D codes axis by axis without decoding them."""
    s, carry = _masked_add(int(a), int(b), WIDTH3, MASKS3)
    if carry:
        raise RangeError("per-axis overflow in morton_sum3")
    return s


def morton_sum6(a: int, b: int) -> int:
    """Add two edge codes on each of their six interleaved axes."""
    s, carry = _masked_add(int(a), int(b), WIDTH6, MASKS6)
    if carry:
        raise RangeError("per-axis overflow in morton_sum6")
    return s


# signed offsets -------------------------------------------------------------

def encode_offset3(delta) -> int:
    """Encode a signed relative offset as per-axis two's complement.

    For nonnegative offsets this equals :func:`encode3`.
    """
    d = [int(x) for x in delta]
    lim = 1 << AXIS_BITS3
    if any(abs(x) >= lim // 2 for x in d):
        raise RangeError(f"offset {tuple(d)} too large")
    return encode3([x % lim for x in d])


def encode_offset6(dsrc, ddst) -> int:
    """Signed (source, destination) offset pair as a 6D code.

    Each of the six axes uses a 10-bit two's complement. For nonnegative
    offsets this equals ``interleave2(encode3(dsrc), encode3(ddst))``.
    """
    lim = 1 << AXIS_BITS6
    parts = []
    for d in (dsrc, ddst):
        d = [int(x) for x in d]
        if any(abs(x) >= lim // 2 for x in d):
            raise RangeError(f"offset {tuple(d)} too large")
        parts.append(encode3([x % lim for x in d]))
    return interleave2(*parts)


def _neg_bits3(delta) -> int:
    # carry class j holds axis 2 - j
    return sum(1 << j for j in range(3) if int(delta[2 - j]) < 0)


def _neg_bits6(dsrc, ddst) -> int:
    bits = 0
    for j in range(3):
        if int(dsrc[2 - j]) < 0:
            bits |= 1 << (2 * j)
        if int(ddst[2 - j]) < 0:
            bits |= 1 << (2 * j + 1)
    return bits


def offset3(code: int, delta) -> int:
    """Shift a voxel code by a signed offset; RangeError if it leaves the grid."""
    s, carry = _masked_add(int(code), encode_offset3(delta), WIDTH3, MASKS3)
    if carry != _neg_bits3(delta):
        raise RangeError("offset leaves the index range")
    return s


def offset3_array(codes, delta):
    """Vectorised :func:`offset3`. Returns ``(codes, valid)``."""
    s, carry = kernels.morton_add(codes, np.uint64(encode_offset3(delta)), WIDTH3, 3)
    return s, carry == _neg_bits3(delta)


def offset6_array(eps, dsrc, ddst):
    """Shift edge codes by signed source/destination offsets."""
    s, carry = kernels.morton_add(eps, np.uint64(encode_offset6(dsrc, ddst)), WIDTH6, 6)
    return s, carry == _neg_bits6(dsrc, ddst)


def swap_edge(eps):
    """Exchange source and destination of edge codes (scalar or array)."""
    if isinstance(eps, np.ndarray):
        e = eps.astype(np.uint64)
        return ((e & np.uint64(_EVEN)) << np.uint64(1)) | ((e & np.uint64(_ODD)) >> np.uint64(1))
    eps = int(eps)
    return ((eps & _EVEN) << 1) | ((eps & _ODD) >> 1)


# array API ------------------------------------------------------------------

def encode3_array(rho) -> np.ndarray:
    rho = np.asarray(rho)
    if rho.size and (rho.min() < 0 or rho.max() >= (1 << AXIS_BITS3)):
        raise RangeError("component outside [0, 2^21)")
    return kernels.encode3(rho.reshape(-1, 3))


def decode3_array(codes) -> np.ndarray:
    return kernels.decode3(codes)


def interleave2_array(src, dst) -> np.ndarray:
    src = np.asarray(src, dtype=np.uint64)
    dst = np.asarray(dst, dtype=np.uint64)
    if (src.size and src.max() >= MAX_CODE6_SOURCE) or (dst.size and dst.max() >= MAX_CODE6_SOURCE):
        raise RangeError("code exceeds 10 bits per axis")
    return kernels.interleave2(src, dst)


def deinterleave2_array(eps):
    return kernels.deinterleave2(eps)


def morton_sum3_array(a, b) -> np.ndarray:
    s, carry = kernels.morton_add(a, b, WIDTH3, 3)
    if carry.any():
        raise RangeError("per-axis overflow in morton_sum3")
    return s


def morton_sum6_array(a, b) -> np.ndarray:
    s, carry = kernels.morton_add(a, b, WIDTH6, 6)
    if carry.any():
        raise RangeError("per-axis overflow in morton_sum6")
    return s
