"""Pure-Python kernels: RK4 runs for the two shooting ODEs and explicit curve-shortening steps.

States:
    planar  (x, y, theta)   x' = cos theta, y' = sin theta,
                            theta' = lam (x sin theta - y cos theta)
    profile (r, z, phi)     r' = cos phi, z' = sin phi,
                            phi' = 2 lam (r sin phi - z cos phi) - sin phi / r

Status codes shared with the compiled module:
    0 event found / run finished, 1 step budget exhausted, 2 escaped the
    radius bound, 3 non-finite state, 4 hit the axis (profile only).
"""
from __future__ import annotations

import math

import numpy as np

OK, MAX_STEPS, ESCAPED, NONFINITE, AXIS = 0, 1, 2, 3, 4
_REFINE_ITERS = 60


def _planar_rhs(lam, x, y, th):
    c, s = math.cos(th), math.sin(th)
    return c, s, lam * (x * s - y * c)


def _profile_rhs(lam, r, z, ph):
    c, s = math.cos(ph), math.sin(ph)
    return c, s, 2.0 * lam * (r * s - z * c) - s / r


def _rk4(rhs, lam, u, v, w, h):
    k1 = rhs(lam, u, v, w)
    k2 = rhs(lam, u + 0.5 * h * k1[0], v + 0.5 * h * k1[1], w + 0.5 * h * k1[2])
    k3 = rhs(lam, u + 0.5 * h * k2[0], v + 0.5 * h * k2[1], w + 0.5 * h * k2[2])
    k4 = rhs(lam, u + h * k3[0], v + h * k3[1], w + h * k3[2])
    h6 = h / 6.0
    return (u + h6 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            v + h6 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            w + h6 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]))


def rk4_step_planar(y, lam, h):
    return np.array(_rk4(_planar_rhs, lam, float(y[0]), float(y[1]), float(y[2]), h))


def rk4_step_profile(y, lam, h):
    return np.array(_rk4(_profile_rhs, lam, float(y[0]), float(y[1]), float(y[2]), h))


def _path(rhs, y0, lam, h, n):
    out = np.empty((n + 1, 3))
    u, v, w = float(y0[0]), float(y0[1]), float(y0[2])
    out[0] = (u, v, w)
    for i in range(1, n + 1):
        u, v, w = _rk4(rhs, lam, u, v, w, h)
        out[i] = (u, v, w)
    return out


def planar_path(y0, lam, h, n):
    """``n`` fixed RK4 steps of size ``h``; returns the ``(n + 1, 3)`` array of states."""
    return _path(_planar_rhs, y0, lam, h, n)


def profile_path(y0, lam, h, n):
    return _path(_profile_rhs, y0, lam, h, n)


def _refine(rhs, g, lam, state, h, g0):
    # bisection on the length of a partial RK4 step from ``state``
    lo, hi = 0.0, h
    for _ in range(_REFINE_ITERS):
        mid = 0.5 * (lo + hi)
        gm = g(*_rk4(rhs, lam, state[0], state[1], state[2], mid))
        if gm == 0.0:
            lo = hi = mid
            break
        if (gm > 0.0) == (g0 > 0.0):
            lo = mid
        else:
            hi = mid
    return hi, _rk4(rhs, lam, state[0], state[1], state[2], hi)


def _support(x, y, th):
    return x * math.cos(th) + y * math.sin(th)


def planar_event(y0, lam, h, max_steps, count=1, rmax=1e3):
    """Run until the ``count``-th sign change of <X, T> = x cos theta + y sin theta.

    The first step is excluded from detection because the symmetric
    initial data starts on the event surface. Returns ``(s, state, status)``.
    """
    st = (float(y0[0]), float(y0[1]), float(y0[2]))
    st = _rk4(_planar_rhs, lam, st[0], st[1], st[2], h)
    s = h
    g_prev = _support(*st)
    seen = 0
    for _ in range(1, max_steps):
        nxt = _rk4(_planar_rhs, lam, st[0], st[1], st[2], h)
        if not all(math.isfinite(c) for c in nxt):
            return s, np.array(st), NONFINITE
        if nxt[0] * nxt[0] + nxt[1] * nxt[1] > rmax * rmax:
            return s + h, np.array(nxt), ESCAPED
        g_new = _support(*nxt)
        if g_prev != 0.0 and (g_new == 0.0 or (g_new > 0.0) != (g_prev > 0.0)):
            seen += 1
            if seen == count:
                dh, ev = _refine(_planar_rhs, _support, lam, st, h, g_prev)
                return s + dh, np.array(ev), OK
        st, g_prev, s = nxt, g_new, s + h
    return s, np.array(st), MAX_STEPS


def _height(r, z, ph):
    return z


def profile_event(y0, lam, h, max_steps, rmin=1e-3, rmax=1e3):
    """Run until z changes sign (first step excluded); stop early near the axis or on escape."""
    st = (float(y0[0]), float(y0[1]), float(y0[2]))
    st = _rk4(_profile_rhs, lam, st[0], st[1], st[2], h)
    s = h
    g_prev = st[1]
    for _ in range(1, max_steps):
        nxt = _rk4(_profile_rhs, lam, st[0], st[1], st[2], h)
        if not all(math.isfinite(c) for c in nxt):
            return s, np.array(st), NONFINITE
        if nxt[0] < rmin:
            return s + h, np.array(nxt), AXIS
        if abs(nxt[0]) > rmax or abs(nxt[1]) > rmax:
            return s + h, np.array(nxt), ESCAPED
        g_new = nxt[1]
        if g_prev != 0.0 and (g_new == 0.0 or (g_new > 0.0) != (g_prev > 0.0)):
            dh, ev = _refine(_profile_rhs, _height, lam, st, h, g_prev)
            return s + dh, np.array(ev), OK
        st, g_prev, s = nxt, g_new, s + h
    return s, np.array(st), MAX_STEPS


def curvature_vectors(pts):
    """Curvature vector of the circle through each consecutive triple of a closed polygon.

    Exact for any polygon inscribed in a circle; zero for collinear triples.
    """
    prev = np.roll(pts, 1, axis=0) - pts
    nxt = np.roll(pts, -1, axis=0) - pts
    a2 = np.einsum("ij,ij->i", prev, prev)
    b2 = np.einsum("ij,ij->i", nxt, nxt)
    d = 2.0 * (prev[:, 0] * nxt[:, 1] - prev[:, 1] * nxt[:, 0])
    cx = nxt[:, 1] * a2 - prev[:, 1] * b2
    cy = prev[:, 0] * b2 - nxt[:, 0] * a2
    out = np.zeros_like(pts)
    live = d != 0.0
    # center c = (cx, cy) / d ; kappa N = c / |c|^2 = d (cx, cy) / (cx^2 + cy^2)
    m2 = cx[live] ** 2 + cy[live] ** 2
    out[live, 0] = d[live] * cx[live] / m2
    out[live, 1] = d[live] * cy[live] / m2
    return out


def csf_steps(pts, dt, nsteps, kmax=1e6):
    """Forward-Euler curve-shortening steps. Returns ``(points, steps_done, status)``.

    ``status`` is 2 when the curvature exceeds ``kmax`` (points from the last
    good step are returned) and 3 on a non-finite update.
    """
    p = np.array(pts, dtype=float, copy=True)
    kmax2 = kmax * kmax
    for i in range(nsteps):
        kv = curvature_vectors(p)
        if np.max(np.einsum("ij,ij->i", kv, kv)) > kmax2:
            return p, i, ESCAPED
        q = p + dt * kv
        if not np.all(np.isfinite(q)):
            return p, i, NONFINITE
        p = q
    return p, nsteps, OK
