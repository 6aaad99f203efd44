"""Pure numpy implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
The package picks one of the two at import time (see ``_backend``).
"""
import numpy as np

NAME = "python"

_U = np.uint64


def _split3(x):
    x = x.astype(np.uint64) & _U(0x1FFFFF)
    x = (x | (x << _U(32))) & _U(0x1F00000000FFFF)
    x = (x | (x << _U(16))) & _U(0x1F0000FF0000FF)
    x = (x | (x << _U(8))) & _U(0x100F00F00F00F00F)
    x = (x | (x << _U(4))) & _U(0x10C30C30C30C30C3)
    x = (x | (x << _U(2))) & _U(0x1249249249249249)
    return x


def _compact3(x):
    x = x & _U(0x1249249249249249)
    x = (x | (x >> _U(2))) & _U(0x10C30C30C30C30C3)
    x = (x | (x >> _U(4))) & _U(0x100F00F00F00F00F)
    x = (x | (x >> _U(8))) & _U(0x1F0000FF0000FF)
    x = (x | (x >> _U(16))) & _U(0x1F00000000FFFF)
    x = (x | (x >> _U(32))) & _U(0x1FFFFF)
    return x


def _split2(x):
    x = x.astype(np.uint64) & _U(0xFFFFFFFF)
    x = (x | (x << _U(16))) & _U(0x0000FFFF0000FFFF)
    x = (x | (x << _U(8))) & _U(0x00FF00FF00FF00FF)
    x = (x | (x << _U(4))) & _U(0x0F0F0F0F0F0F0F0F)
    x = (x | (x << _U(2))) & _U(0x3333333333333333)
    x = (x | (x << _U(1))) & _U(0x5555555555555555)
    return x


def _compact2(x):
    x = x & _U(0x5555555555555555)
    x = (x | (x >> _U(1))) & _U(0x3333333333333333)
    x = (x | (x >> _U(2))) & _U(0x0F0F0F0F0F0F0F0F)
    x = (x | (x >> _U(4))) & _U(0x00FF00FF00FF00FF)
    x = (x | (x >> _U(8))) & _U(0x0000FFFF0000FFFF)
    x = (x | (x >> _U(16))) & _U(0xFFFFFFFF)
    return x


def encode3(rho):
    """(n, 3) nonnegative integers -> (n,) uint64 codes. No range check."""
    rho = np.asarray(rho, dtype=np.uint64).reshape(-1, 3)
    return (_split3(rho[:, 0]) << _U(2)) | (_split3(rho[:, 1]) << _U(1)) | _split3(rho[:, 2])


def decode3(codes):
    codes = np.asarray(codes, dtype=np.uint64).reshape(-1)
    out = np.empty((codes.size, 3), dtype=np.int64)
    out[:, 0] = _compact3(codes >> _U(2))
    out[:, 1] = _compact3(codes >> _U(1))
    out[:, 2] = _compact3(codes)
    return out


def interleave2(src, dst):
    src = np.asarray(src, dtype=np.uint64).reshape(-1)
    dst = np.asarray(dst, dtype=np.uint64).reshape(-1)
    return _split2(src) | (_split2(dst) << _U(1))


def deinterleave2(eps):
    eps = np.asarray(eps, dtype=np.uint64).reshape(-1)
    return _compact2(eps), _compact2(eps >> _U(1))


def class_masks(width, period):
    masks = []
    for j in range(period):
        m = 0
        for p in range(j, width, period):
            m |= 1 << p
        masks.append(m)
    return masks


def morton_add(a, b, width, period):
    """Carry-masked addition of interleaved codes.

    Each of the ``period`` bit classes below ``width`` is added independently,
    wrapping modulo its own width. Returns the sums and a uint8 array whose
    bit ``j`` is set when class ``j`` carried out of its top bit.
    """
    a = np.asarray(a, dtype=np.uint64).reshape(-1)
    b = np.broadcast_to(np.asarray(b, dtype=np.uint64), a.shape)
    full = (1 << width) - 1
    out = np.zeros(a.shape, dtype=np.uint64)
    carry = np.zeros(a.shape, dtype=np.uint8)
    for j, m in enumerate(class_masks(width, period)):
        mu = _U(m)
        t = (a | _U(full ^ m)) + (b & mu)
        out |= t & mu
        carry |= ((t >> _U(width)) & _U(1)).astype(np.uint8) << np.uint8(j)
    return out, carry


def lookup(keys, queries):
    """Index of each query in the sorted unique ``keys`` or -1 when absent."""
    keys = np.asarray(keys, dtype=np.uint64)
    queries = np.asarray(queries, dtype=np.uint64).reshape(-1)
    if keys.size == 0:
        return np.full(queries.size, -1, dtype=np.int64)
    pos = np.searchsorted(keys, queries)
    pos_c = np.minimum(pos, keys.size - 1)
    found = keys[pos_c] == queries
    return np.where(found, pos_c, -1).astype(np.int64)


def _axis_range(lo, hi, origin, step, n, tol):
    k_lo = np.ceil((lo - origin) / step - tol).astype(np.int64)
    k_hi = np.floor((hi - origin) / step + tol).astype(np.int64)
    return np.maximum(k_lo, 0), np.minimum(k_hi, n - 1)


def cast_rays(tris, axis, origin_r, step_r, n_r, origin_f, step_f, n_f,
              start_m, length_m, tol):
    """Intersect a regular family of axis-parallel rays with triangles.

    Rays run along ``axis`` from ``start_m`` over ``length_m``; ray ``(k0, k1)``
    sits at ``origin_r + k0*step_r`` on the right axis and
    ``origin_f + k1*step_f`` on the front axis. Only rays inside each
    triangle's projected bounding box are tested.

    Returns ``(tri, k0, k1, r, s, t, sign, n_tests)``.
    """
    tris = np.ascontiguousarray(tris, dtype=np.float64).reshape(-1, 3, 3)
    ar, af = (axis + 1) % 3, (axis + 2) % 3
    x0 = tris[:, 0]
    u = tris[:, 1] - x0
    v = tris[:, 2] - x0
    w = np.cross(u, v)
    delta = -length_m * w[:, axis]
    scale = length_m * np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1)
    ok = np.abs(delta) > 1e-12 * scale

    lo = tris.min(axis=1)
    hi = tris.max(axis=1)
    r_lo, r_hi = _axis_range(lo[:, ar], hi[:, ar], origin_r, step_r, n_r, tol)
    f_lo, f_hi = _axis_range(lo[:, af], hi[:, af], origin_f, step_f, n_f, tol)
    nr = np.maximum(r_hi - r_lo + 1, 0)
    nf = np.maximum(f_hi - f_lo + 1, 0)
    counts = np.where(ok, nr * nf, 0)
    total = int(counts.sum())
    empty_i = np.empty(0, dtype=np.int64)
    empty_f = np.empty(0, dtype=np.float64)
    if total == 0:
        return (empty_i, empty_i, empty_i, empty_f, empty_f, empty_f,
                np.empty(0, dtype=np.int8), 0)

    tri = np.repeat(np.arange(tris.shape[0], dtype=np.int64), counts)
    start = np.cumsum(counts) - counts
    local = np.arange(total, dtype=np.int64) - np.repeat(start, counts)
    nf_t = nf[tri]
    k0 = r_lo[tri] + local // nf_t
    k1 = f_lo[tri] + local % nf_t

    b = np.empty((total, 3))
    b[:, axis] = start_m - x0[tri, axis]
    b[:, ar] = origin_r + k0 * step_r - x0[tri, ar]
    b[:, af] = origin_f + k1 * step_f - x0[tri, af]
    dl = delta[tri]
    wt = w[tri]
    r = np.einsum("ij,ij->i", b, wt) / dl
    # e = d x b with d = length_m * unit(axis)
    e = np.zeros((total, 3))
    e[:, ar] = -length_m * b[:, af]
    e[:, af] = length_m * b[:, ar]
    s = -np.einsum("ij,ij->i", e, v[tri]) / dl
    t = np.einsum("ij,ij->i", e, u[tri]) / dl
    hit = ((r >= -tol) & (r <= 1.0 + tol) & (s >= -tol) & (t >= -tol)
           & (s + t <= 1.0 + tol))
    sign = np.where(dl > 0, 1, -1).astype(np.int8)
    return (tri[hit], k0[hit], k1[hit], r[hit], s[hit], t[hit], sign[hit], total)
