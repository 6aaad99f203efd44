# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport ceil, floor, fabs, sqrt
from libc.stdint cimport uint64_t, int64_t, uint8_t, int8_t

cnp.import_array()

NAME = "cython"


cdef inline uint64_t split3(uint64_t x) nogil:
    x &= 0x1FFFFFULL
    x = (x | (x << 32)) & 0x1F00000000FFFFULL
    x = (x | (x << 16)) & 0x1F0000FF0000FFULL
    x = (x | (x << 8)) & 0x100F00F00F00F00FULL
    x = (x | (x << 4)) & 0x10C30C30C30C30C3ULL
    x = (x | (x << 2)) & 0x1249249249249249ULL
    return x


cdef inline uint64_t compact3(uint64_t x) nogil:
    x &= 0x1249249249249249ULL
    x = (x | (x >> 2)) & 0x10C30C30C30C30C3ULL
    x = (x | (x >> 4)) & 0x100F00F00F00F00FULL
    x = (x | (x >> 8)) & 0x1F0000FF0000FFULL
    x = (x | (x >> 16)) & 0x1F00000000FFFFULL
    x = (x | (x >> 32)) & 0x1FFFFFULL
    return x


cdef inline uint64_t split2(uint64_t x) nogil:
    x &= 0xFFFFFFFFULL
    x = (x | (x << 16)) & 0x0000FFFF0000FFFFULL
    x = (x | (x << 8)) & 0x00FF00FF00FF00FFULL
    x = (x | (x << 4)) & 0x0F0F0F0F0F0F0F0FULL
    x = (x | (x << 2)) & 0x3333333333333333ULL
    x = (x | (x << 1)) & 0x5555555555555555ULL
    return x


cdef inline uint64_t compact2(uint64_t x) nogil:
    x &= 0x5555555555555555ULL
    x = (x | (x >> 1)) & 0x3333333333333333ULL
    x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0FULL
    x = (x | (x >> 4)) & 0x00FF00FF00FF00FFULL
    x = (x | (x >> 8)) & 0x0000FFFF0000FFFFULL
    x = (x | (x >> 16)) & 0xFFFFFFFFULL
    return x


def encode3(rho):
    cdef const uint64_t[:, ::1] r = np.ascontiguousarray(
        np.asarray(rho, dtype=np.uint64).reshape(-1, 3))
    cdef Py_ssize_t n = r.shape[0], i
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = (split3(r[i, 0]) << 2) | (split3(r[i, 1]) << 1) | split3(r[i, 2])
    return out


def decode3(codes):
    cdef const uint64_t[::1] c = np.ascontiguousarray(
        np.asarray(codes, dtype=np.uint64).reshape(-1))
    cdef Py_ssize_t n = c.shape[0], i
    out = np.empty((n, 3), dtype=np.int64)
    cdef int64_t[:, ::1] o = out
    with nogil:
        for i in range(n):
            o[i, 0] = <int64_t>compact3(c[i] >> 2)
            o[i, 1] = <int64_t>compact3(c[i] >> 1)
            o[i, 2] = <int64_t>compact3(c[i])
    return out


def interleave2(src, dst):
    cdef const uint64_t[::1] a = np.ascontiguousarray(np.asarray(src, dtype=np.uint64).reshape(-1))
    cdef const uint64_t[::1] b = np.ascontiguousarray(np.asarray(dst, dtype=np.uint64).reshape(-1))
    cdef Py_ssize_t n = a.shape[0], i
    out = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = split2(a[i]) | (split2(b[i]) << 1)
    return out


def deinterleave2(eps):
    cdef const uint64_t[::1] e = np.ascontiguousarray(np.asarray(eps, dtype=np.uint64).reshape(-1))
    cdef Py_ssize_t n = e.shape[0], i
    src = np.empty(n, dtype=np.uint64)
    dst = np.empty(n, dtype=np.uint64)
    cdef uint64_t[::1] s = src
    cdef uint64_t[::1] d = dst
    with nogil:
        for i in range(n):
            s[i] = compact2(e[i])
            d[i] = compact2(e[i] >> 1)
    return src, dst


def class_masks(int width, int period):
    masks = []
    for j in range(period):
        m = 0
        for p in range(j, width, period):
            m |= 1 << p
        masks.append(m)
    return masks


def morton_add(a, b, int width, int period):
    cdef const uint64_t[::1] av = np.ascontiguousarray(np.asarray(a, dtype=np.uint64).reshape(-1))
    cdef Py_ssize_t n = av.shape[0], i
    cdef const uint64_t[::1] bv = np.ascontiguousarray(
        np.broadcast_to(np.asarray(b, dtype=np.uint64), (n,)))
    cdef uint64_t[8] masks
    cdef int j
    py_masks = class_masks(width, period)
    for j in range(period):
        masks[j] = py_masks[j]
    cdef uint64_t full = (<uint64_t>1 << width) - 1
    out = np.empty(n, dtype=np.uint64)
    carry = np.empty(n, dtype=np.uint8)
    cdef uint64_t[::1] o = out
    cdef uint8_t[::1] cv = carry
    cdef uint64_t t, acc, m
    cdef uint8_t cbits
    with nogil:
        for i in range(n):
            acc = 0
            cbits = 0
            for j in range(period):
                m = masks[j]
                t = (av[i] | (full ^ m)) + (bv[i] & m)
                acc |= t & m
                cbits |= <uint8_t>(((t >> width) & 1) << j)
            o[i] = acc
            cv[i] = cbits
    return out, carry


def lookup(keys, queries):
    cdef const uint64_t[::1] k = np.ascontiguousarray(np.asarray(keys, dtype=np.uint64).reshape(-1))
    cdef const uint64_t[::1] q = np.ascontiguousarray(np.asarray(queries, dtype=np.uint64).reshape(-1))
    cdef Py_ssize_t n = q.shape[0], m = k.shape[0], i, lo, hi, mid
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    with nogil:
        for i in range(n):
            lo = 0
            hi = m
            while lo < hi:
                mid = (lo + hi) >> 1
                if k[mid] < q[i]:
                    lo = mid + 1
                else:
                    hi = mid
            if lo < m and k[lo] == q[i]:
                o[i] = lo
            else:
                o[i] = -1
    return out


def cast_rays(tris, int axis, double origin_r, double step_r, Py_ssize_t n_r,
              double origin_f, double step_f, Py_ssize_t n_f,
              double start_m, double length_m, double tol):
    cdef const double[:, :, ::1] T = np.ascontiguousarray(
        np.asarray(tris, dtype=np.float64).reshape(-1, 3, 3))
    cdef Py_ssize_t nt = T.shape[0], ti, k0, k1, k0_lo, k0_hi, k1_lo, k1_hi
    cdef int ar = (axis + 1) % 3, af = (axis + 2) % 3, c
    cdef double u[3]
    cdef double v[3]
    cdef double w[3]
    cdef double b[3]
    cdef double e[3]
    cdef double lo_r, hi_r, lo_f, hi_f, delta, scale, r, s, t
    cdef long long n_tests = 0

    cap = 1024
    tri_o = np.empty(cap, dtype=np.int64)
    k0_o = np.empty(cap, dtype=np.int64)
    k1_o = np.empty(cap, dtype=np.int64)
    r_o = np.empty(cap, dtype=np.float64)
    s_o = np.empty(cap, dtype=np.float64)
    t_o = np.empty(cap, dtype=np.float64)
    g_o = np.empty(cap, dtype=np.int8)
    cdef int64_t[::1] tri_v = tri_o
    cdef int64_t[::1] k0_v = k0_o
    cdef int64_t[::1] k1_v = k1_o
    cdef double[::1] r_v = r_o
    cdef double[::1] s_v = s_o
    cdef double[::1] t_v = t_o
    cdef int8_t[::1] g_v = g_o
    cdef Py_ssize_t nh = 0

    for ti in range(nt):
        for c in range(3):
            u[c] = T[ti, 1, c] - T[ti, 0, c]
            v[c] = T[ti, 2, c] - T[ti, 0, c]
        w[0] = u[1] * v[2] - u[2] * v[1]
        w[1] = u[2] * v[0] - u[0] * v[2]
        w[2] = u[0] * v[1] - u[1] * v[0]
        delta = -length_m * w[axis]
        scale = length_m * sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) \
            * sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
        if fabs(delta) <= 1e-12 * scale:
            continue
        lo_r = min(T[ti, 0, ar], min(T[ti, 1, ar], T[ti, 2, ar]))
        hi_r = max(T[ti, 0, ar], max(T[ti, 1, ar], T[ti, 2, ar]))
        lo_f = min(T[ti, 0, af], min(T[ti, 1, af], T[ti, 2, af]))
        hi_f = max(T[ti, 0, af], max(T[ti, 1, af], T[ti, 2, af]))
        k0_lo = max(<Py_ssize_t>ceil((lo_r - origin_r) / step_r - tol), 0)
        k0_hi = min(<Py_ssize_t>floor((hi_r - origin_r) / step_r + tol), n_r - 1)
        k1_lo = max(<Py_ssize_t>ceil((lo_f - origin_f) / step_f - tol), 0)
        k1_hi = min(<Py_ssize_t>floor((hi_f - origin_f) / step_f + tol), n_f - 1)
        for k0 in range(k0_lo, k0_hi + 1):
            for k1 in range(k1_lo, k1_hi + 1):
                n_tests += 1
                b[axis] = start_m - T[ti, 0, axis]
                b[ar] = origin_r + k0 * step_r - T[ti, 0, ar]
                b[af] = origin_f + k1 * step_f - T[ti, 0, af]
                r = (b[0] * w[0] + b[1] * w[1] + b[2] * w[2]) / delta
                if r < -tol or r > 1.0 + tol:
                    continue
                e[axis] = 0.0
                e[ar] = -length_m * b[af]
                e[af] = length_m * b[ar]
                s = -(e[0] * v[0] + e[1] * v[1] + e[2] * v[2]) / delta
                if s < -tol:
                    continue
                t = (e[0] * u[0] + e[1] * u[1] + e[2] * u[2]) / delta
                if t < -tol or s + t > 1.0 + tol:
                    continue
                if nh == cap:
                    cap *= 2
                    tri_o = np.resize(tri_o, cap)
                    k0_o = np.resize(k0_o, cap)
                    k1_o = np.resize(k1_o, cap)
                    r_o = np.resize(r_o, cap)
                    s_o = np.resize(s_o, cap)
                    t_o = np.resize(t_o, cap)
                    g_o = np.resize(g_o, cap)
                    tri_v = tri_o
                    k0_v = k0_o
                    k1_v = k1_o
                    r_v = r_o
                    s_v = s_o
                    t_v = t_o
                    g_v = g_o
                tri_v[nh] = ti
                k0_v[nh] = k0
                k1_v[nh] = k1
                r_v[nh] = r
                s_v[nh] = s
                t_v[nh] = t
                g_v[nh] = 1 if delta > 0 else -1
                nh += 1
    return (tri_o[:nh].copy(), k0_o[:nh].copy(), k1_o[:nh].copy(),
            r_o[:nh].copy(), s_o[:nh].copy(), t_o[:nh].copy(),
            g_o[:nh].copy(), int(n_tests))
