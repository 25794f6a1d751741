# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of :mod:`selfsim._kernels._pykernels` (same signatures and status codes)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, isfinite

cnp.import_array()

cdef enum:
    REFINE_ITERS = 60

cdef enum:
    OK = 0
    MAX_STEPS = 1
    ESCAPED = 2
    NONFINITE = 3
    AXIS = 4


cdef inline void _planar_rhs(double lam, double* y, double* out) noexcept nogil:
    cdef double c = cos(y[2]), s = sin(y[2])
    out[0] = c
    out[1] = s
    out[2] = lam * (y[0] * s - y[1] * c)


cdef inline void _profile_rhs(double lam, double* y, double* out) noexcept nogil:
    cdef double c = cos(y[2]), s = sin(y[2])
    out[0] = c
    out[1] = s
    out[2] = 2.0 * lam * (y[0] * s - y[1] * c) - s / y[0]


ctypedef void (*rhs_t)(double, double*, double*) noexcept nogil


cdef inline void _rk4(rhs_t f, double lam, double* y, double h, double* out) noexcept nogil:
    cdef double k1[3]
    cdef double k2[3]
    cdef double k3[3]
    cdef double k4[3]
    cdef double tmp[3]
    cdef int j
    f(lam, y, k1)
    for j in range(3):
        tmp[j] = y[j] + 0.5 * h * k1[j]
    f(lam, tmp, k2)
    for j in range(3):
        tmp[j] = y[j] + 0.5 * h * k2[j]
    f(lam, tmp, k3)
    for j in range(3):
        tmp[j] = y[j] + h * k3[j]
    f(lam, tmp, k4)
    for j in range(3):
        out[j] = y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])


cdef inline double _support(double* y) noexcept nogil:
    return y[0] * cos(y[2]) + y[1] * sin(y[2])


cdef inline double _height(double* y) noexcept nogil:
    return y[1]


ctypedef double (*event_t)(double*) noexcept nogil


cdef double _refine(rhs_t f, event_t g, double lam, double* y, double h, double g0, double* out) noexcept nogil:
    cdef double lo = 0.0, hi = h, mid, gm
    cdef int i
    for i in range(REFINE_ITERS):
        mid = 0.5 * (lo + hi)
        _rk4(f, lam, y, mid, out)
        gm = g(out)
        if gm == 0.0:
            lo = mid
            hi = mid
            break
        if (gm > 0.0) == (g0 > 0.0):
            lo = mid
        else:
            hi = mid
    _rk4(f, lam, y, hi, out)
    return hi


cdef inline bint _finite3(double* y) noexcept nogil:
    return isfinite(y[0]) and isfinite(y[1]) and isfinite(y[2])


def rk4_step_planar(y, double lam, double h):
    cdef double a[3]
    cdef double b[3]
    a[0], a[1], a[2] = y[0], y[1], y[2]
    _rk4(_planar_rhs, lam, a, h, b)
    return np.array([b[0], b[1], b[2]])


def rk4_step_profile(y, double lam, double h):
    cdef double a[3]
    cdef double b[3]
    a[0], a[1], a[2] = y[0], y[1], y[2]
    _rk4(_profile_rhs, lam, a, h, b)
    return np.array([b[0], b[1], b[2]])


cdef object _path(rhs_t f, y0, double lam, double h, Py_ssize_t n):
    out = np.empty((n + 1, 3))
    cdef double[:, ::1] o = out
    cdef double y[3]
    cdef double z[3]
    cdef Py_ssize_t i
    cdef int j
    y[0], y[1], y[2] = y0[0], y0[1], y0[2]
    with nogil:
        for j in range(3):
            o[0, j] = y[j]
        for i in range(1, n + 1):
            _rk4(f, lam, y, h, z)
            for j in range(3):
                y[j] = z[j]
                o[i, j] = y[j]
    return out


def planar_path(y0, double lam, double h, Py_ssize_t n):
    return _path(_planar_rhs, y0, lam, h, n)


def profile_path(y0, double lam, double h, Py_ssize_t n):
    return _path(_profile_rhs, y0, lam, h, n)


def planar_event(y0, double lam, double h, Py_ssize_t max_steps, int count=1, double rmax=1e3):
    cdef double y[3]
    cdef double z[3]
    cdef double ev[3]
    cdef double s, g_prev, g_new, dh
    cdef Py_ssize_t i
    cdef int seen = 0, status = MAX_STEPS, j
    y[0], y[1], y[2] = y0[0], y0[1], y0[2]
    with nogil:
        _rk4(_planar_rhs, lam, y, h, z)
        for j in range(3):
            y[j] = z[j]
        s = h
        g_prev = _support(y)
        for i in range(1, max_steps):
            _rk4(_planar_rhs, lam, y, h, z)
            if not _finite3(z):
                status = NONFINITE
                break
            if z[0] * z[0] + z[1] * z[1] > rmax * rmax:
                s += h
                for j in range(3):
                    y[j] = z[j]
                status = ESCAPED
                break
            g_new = _support(z)
            if g_prev != 0.0 and (g_new == 0.0 or (g_new > 0.0) != (g_prev > 0.0)):
                seen += 1
                if seen == count:
                    dh = _refine(_planar_rhs, _support, lam, y, h, g_prev, ev)
                    s += dh
                    for j in range(3):
                        y[j] = ev[j]
                    status = OK
                    break
            for j in range(3):
                y[j] = z[j]
            g_prev = g_new
            s += h
    return s, np.array([y[0], y[1], y[2]]), status


def profile_event(y0, double lam, double h, Py_ssize_t max_steps, double rmin=1e-3, double rmax=1e3):
    cdef double y[3]
    cdef double z[3]
    cdef double ev[3]
    cdef double s, g_prev, g_new, dh
    cdef Py_ssize_t i
    cdef int status = MAX_STEPS, j
    y[0], y[1], y[2] = y0[0], y0[1], y0[2]
    with nogil:
        _rk4(_profile_rhs, lam, y, h, z)
        for j in range(3):
            y[j] = z[j]
        s = h
        g_prev = y[1]
        for i in range(1, max_steps):
            _rk4(_profile_rhs, lam, y, h, z)
            if not _finite3(z):
                status = NONFINITE
                break
            if z[0] < rmin or z[0] > rmax or z[1] > rmax or z[1] < -rmax:
                s += h
                for j in range(3):
                    y[j] = z[j]
                status = AXIS if z[0] < rmin else ESCAPED
                break
            g_new = z[1]
            if g_prev != 0.0 and (g_new == 0.0 or (g_new > 0.0) != (g_prev > 0.0)):
                dh = _refine(_profile_rhs, _height, lam, y, h, g_prev, ev)
                s += dh
                for j in range(3):
                    y[j] = ev[j]
                status = OK
                break
            for j in range(3):
                y[j] = z[j]
            g_prev = g_new
            s += h
    return s, np.array([y[0], y[1], y[2]]), status


cdef void _curvature(double[:, ::1] p, double[:, ::1] kv) noexcept nogil:
    cdef Py_ssize_t n = p.shape[0], i, ip, im
    cdef double ax, ay, bx, by, a2, b2, d, cx, cy, m2
    for i in range(n):
        im = i - 1 if i > 0 else n - 1
        ip = i + 1 if i < n - 1 else 0
        ax = p[im, 0] - p[i, 0]
        ay = p[im, 1] - p[i, 1]
        bx = p[ip, 0] - p[i, 0]
        by = p[ip, 1] - p[i, 1]
        a2 = ax * ax + ay * ay
        b2 = bx * bx + by * by
        d = 2.0 * (ax * by - ay * bx)
        if d == 0.0:
            kv[i, 0] = 0.0
            kv[i, 1] = 0.0
            continue
        cx = by * a2 - ay * b2
        cy = ax * b2 - bx * a2
        m2 = cx * cx + cy * cy
        kv[i, 0] = d * cx / m2
        kv[i, 1] = d * cy / m2


def curvature_vectors(pts):
    p = np.ascontiguousarray(pts, dtype=float)
    out = np.zeros_like(p)
    _curvature(p, out)
    return out


def csf_steps(pts, double dt, Py_ssize_t nsteps, double kmax=1e6):
    p_arr = np.array(pts, dtype=float, copy=True, order="C")
    kv_arr = np.zeros_like(p_arr)
    cdef double[:, ::1] p = p_arr
    cdef double[:, ::1] kv = kv_arr
    cdef Py_ssize_t n = p.shape[0], i, step
    cdef double kmax2 = kmax * kmax, m
    cdef int status = OK
    cdef bint bad
    with nogil:
        for step in range(nsteps):
            _curvature(p, kv)
            m = 0.0
            bad = False
            for i in range(n):
                m = max(m, kv[i, 0] * kv[i, 0] + kv[i, 1] * kv[i, 1])
                if not (isfinite(kv[i, 0]) and isfinite(kv[i, 1])):
                    bad = True
            if m > kmax2:
                status = ESCAPED
                break
            if bad:
                status = NONFINITE
                break
            for i in range(n):
                p[i, 0] += dt * kv[i, 0]
                p[i, 1] += dt * kv[i, 1]
    if status != OK:
        return p_arr, step, status
    return p_arr, nsteps, OK
