"""Explicit shrinkers and the two shooting constructions.

Both ODEs are specialisations of the residual equation with unit-speed
parametrisations:

* planar curve (x, y, theta), curvature theta' = lam (x sin theta - y cos theta),
  i.e. kappa = -lam <X, n> with n the left normal;
* meridian (r, z, phi) of a surface of revolution,
  phi' = 2 lam (r sin phi - z cos phi) - sin phi / r.

Everything is solved at lam = 1 and rescaled by X -> X / sqrt(lam).
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.interpolate import CubicSpline

from .. import _kernels
from .. import numerics as dm
from ..geometry import DegenerateJetError, cylinder_patch, plane_patch, sphere_patch
from ..numerics import BracketError, Dual2, bracket_root
from .curves import PLANAR, PROFILE, SampledCurve, ShootResult, spectral_derivatives

STEP = 1e-3
MAX_STEPS = 2_000_000


def canonical_shrinker(kind: str, radius: float = 1.0, axis: str = "z"):
    """Chart and lam for ``"sphere"``, ``"cylinder"`` or ``"plane"``.

    Sphere(R): lam = 1 / R^2. Cylinder(r): lam = 1 / (2 r^2). The plane
    through the origin solves the equation for every lam; ``None`` is
    returned in that slot.
    """
    kind = kind.lower()
    if kind == "plane":
        return plane_patch(0.0), None
    if not radius > 0:
        raise ValueError("radius must be positive")
    if kind == "sphere":
        return sphere_patch(radius), 1.0 / radius ** 2
    if kind == "cylinder":
        order = {"z": (0, 1, 2), "x": (2, 0, 1), "y": (1, 2, 0)}
        if axis not in order:
            raise ValueError("axis must be 'x', 'y' or 'z'")
        base, idx = cylinder_patch(radius), order[axis]

        def patch(s, t):
            X = base(s, t)
            return tuple(X[i] for i in idx)
        return patch, 1.0 / (2.0 * radius ** 2)
    raise ValueError(f"unknown shrinker kind {kind!r}")


def _check_lam(lam):
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return 1.0 / math.sqrt(lam)


# ---------------------------------------------------------------------------
# Abresch-Langer curves
# ---------------------------------------------------------------------------

def half_period(k0: float, h: float = STEP):
    """Arclength to the next extremum of |X| and the tangent turning there (lam = 1).

    Returns ``(s_half, turn_ratio, status)`` with ``turn_ratio`` the tangent
    turning over a half period divided by pi. A closed curve has
    ``turn_ratio = p / q`` (rotation index p, q lobes).
    """
    s, y, status = _kernels.planar_event((k0, 0.0, 0.5 * math.pi), 1.0, h, MAX_STEPS)
    return s, (y[2] - 0.5 * math.pi) / math.pi, status


def closure_ratio(k0: float, h: float = STEP) -> float:
    """Half-period turning ratio at lam = 1 (nan when no half period is found)."""
    _, ratio, status = half_period(k0, h)
    if status != _kernels.OK:
        return math.nan
    return ratio


def _unit_speed_derivatives(pts, chord_length):
    # the chord sum undershoots the arclength; the mean spectral speed fixes the period
    d1, d2 = spectral_derivatives(pts, chord_length)
    speed = float(np.mean(np.hypot(d1[:, 0], d1[:, 1])))
    return d1 / speed, d2 / speed ** 2


def planar_ode_residual(curve: SampledCurve, lam: float) -> float:
    """max |kappa - lam (x y' - y x')| from spectral derivatives of a uniform closed sampling."""
    pts = curve.points
    d1, d2 = _unit_speed_derivatives(pts, curve.length)
    kappa = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    return float(np.max(np.abs(kappa - lam * (pts[:, 0] * d1[:, 1] - pts[:, 1] * d1[:, 0]))))


def _planar_run(k0n: float, length: float, n: int):
    m = max(n, int(math.ceil(length / STEP)))
    path = _kernels.planar_path((k0n, 0.0, 0.5 * math.pi), 1.0, length / m, m)
    gap = float(np.hypot(*(path[-1, :2] - path[0, :2])))
    turn = path[-1, 2] - path[0, 2]
    rot = int(round(turn / (2.0 * math.pi)))
    ang = abs(turn - 2.0 * math.pi * rot)
    # keep about n points of the m integration steps
    stride = max(1, m // n)
    while m % stride:
        stride -= 1
    return path[::stride, :2], max(gap, ang), rot


def _planar_result(pts, c, k0, defect, rot, tol, info):
    ok = bool(c * defect < tol)
    # a closed curve drops the repeated end point; a non-closing one stays open
    curve = SampledCurve(c * (pts[:-1] if ok else pts), closed=ok, kind=PLANAR, arclength=True)
    return ShootResult(curve, k0, c * defect, rot, ok, info)


def abresch_langer_shoot(lam: float, k0: float, tol: float = 1e-8, max_q: int = 12, n: int = 2048) -> ShootResult:
    """Shoot from (k0 / lam, 0) with vertical tangent and curvature k0.

    The rotation ratio over one half period is rounded to the nearest
    fraction p / q with q <= ``max_q``; the curve is integrated over q
    periods and the mismatch of position and tangent there is reported.
    Escape or a missing half period gives a non-closing result.
    """
    c = _check_lam(lam)
    if not k0 > 0:
        raise ValueError("k0 must be positive")
    k0n = k0 * c  # curvature at lam = 1
    info = {"lambda": float(lam), "kind": "abresch-langer"}
    if abs(k0n - 1.0) <= 1e-12:
        pts, defect, rot = _planar_run(1.0, 2.0 * math.pi, n)
        info.update(p=1, q=1, circle=True)
        return _planar_result(pts, c, k0, defect, rot, tol, info)
    s_half, ratio, status = half_period(k0n)
    if status != _kernels.OK:
        info.update(status=int(status), reason="no half period found")
        return ShootResult(None, k0, math.inf, 0, False, info)
    frac = Fraction(ratio).limit_denominator(max_q)
    q = frac.denominator
    pts, defect, rot = _planar_run(k0n, 2.0 * q * s_half, n)
    info.update(p=frac.numerator, q=q, ratio=float(ratio), circle=False)
    return _planar_result(pts, c, k0, defect, rot, tol, info)


def abresch_langer_solve(lam: float, p: int, q: int, bracket=(1.0 + 1e-6, 3.0),
                         tol: float = 1e-8, n: int = 2048) -> ShootResult:
    """Bisect k0 over ``bracket`` so the half-period turning ratio equals p / q, then shoot."""
    c = _check_lam(lam)
    target = p / q
    k0n = bracket_root(lambda k: closure_ratio(k) - target, bracket[0] * c, bracket[1] * c, tol=1e-14)
    return abresch_langer_shoot(lam, k0n / c, tol=tol, max_q=q, n=n)


def abresch_langer_scan(lam: float = 1.0, k0_range=(1.0, 3.0), samples: int = 41, max_q: int = 8,
                        tol: float = 1e-6, n: int = 2048, jump_tol: float = 0.02):
    """Closed non-circular curves in the k0 range, one per fraction p / q with q <= ``max_q``.

    The turning ratio is sampled on a grid and refined once at the midpoints;
    a jump larger than ``jump_tol`` between neighbours aborts the scan
    (a bracket could otherwise be skipped).
    """
    c = _check_lam(lam)
    lo, hi = k0_range[0] * c, k0_range[1] * c
    grid = np.linspace(lo, hi, samples)
    grid[0] = lo + 1e-6 * (hi - lo) if abs(lo - 1.0) < 1e-9 else lo
    vals = np.array([closure_ratio(k) for k in grid])
    mids = 0.5 * (grid[1:] + grid[:-1])
    mvals = np.array([closure_ratio(k) for k in mids])
    ok = np.isfinite(vals)
    jumps = np.maximum(np.abs(mvals - vals[:-1]), np.abs(vals[1:] - mvals))
    if np.any(jumps[ok[:-1] & ok[1:]] > jump_tol):
        raise RuntimeError("turning ratio jumps between scan points; refine the scan")
    found = []
    seen = set()
    for i in range(samples - 1):
        a, b = vals[i], vals[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        for qq in range(2, max_q + 1):
            for pp in range(1, qq):
                fr = Fraction(pp, qq)
                if fr in seen or fr.denominator != qq:
                    continue
                t = pp / qq
                if (a - t) * (b - t) < 0:
                    seen.add(fr)
                    found.append(abresch_langer_solve(lam, pp, qq, bracket=(grid[i] / c, grid[i + 1] / c),
                                                      tol=tol, n=n))
    return found


# ---------------------------------------------------------------------------
# Angenent torus
# ---------------------------------------------------------------------------

ANGENENT_BRACKET = (0.15, 0.3)


def _profile_closure(r0: float, lam: float, h: float):
    s, y, status = _kernels.profile_event((r0, 0.0, 0.5 * math.pi), lam, h, MAX_STEPS)
    return s, y, status


def angenent_profile_shoot(lam: float = 1.0, bracket=None, tol: float = 1e-8, n: int = 32768,
                           normalize: bool = True, h: float = STEP) -> ShootResult:
    """Closed meridian of the shrinking torus.

    Shoots upward from (r0, 0) with vertical tangent, stops at the next
    crossing of z = 0 and bisects r0 on cos(phi) there. The half profile is
    re-integrated with ``n // 2`` equal steps and reflected in z = 0.

    With ``normalize=False`` the ODE is integrated at the given lam
    directly (used to check the scaling law); the bracket then refers to
    that lam.

    Raises
    ------
    BracketError
        If cos(phi) does not change sign over the bracket.
    """
    c = _check_lam(lam)
    lam_int, scale = (1.0, c) if normalize else (lam, 1.0)
    if bracket is None:
        lo, hi = ANGENENT_BRACKET if normalize else (ANGENENT_BRACKET[0] * c, ANGENENT_BRACKET[1] * c)
    else:
        lo, hi = (bracket[0] / c, bracket[1] / c) if normalize else bracket
    hh = h if normalize else h * c

    def g(r0):
        _, y, status = _profile_closure(r0, lam_int, hh)
        return math.cos(y[2]) if status == _kernels.OK else math.nan

    glo, ghi = g(lo), g(hi)
    if not (np.isfinite(glo) and np.isfinite(ghi)) or glo * ghi > 0:
        raise BracketError(f"closure angle has no sign change on [{lo * scale}, {hi * scale}]")
    r0 = bracket_root(g, lo, hi, tol=1e-15 * max(1.0, hi))
    s_half, y, status = _profile_closure(r0, lam_int, hh)
    m = n // 2
    half = _kernels.profile_path((r0, 0.0, 0.5 * math.pi), lam_int, s_half / m, m)
    defect = max(abs(math.cos(half[-1, 2])), abs(half[-1, 1]))
    lower = half[-2:0:-1, :2] * np.array([1.0, -1.0])
    pts = np.vstack([half[:, :2], lower]) * scale
    curve = SampledCurve(pts, closed=True, kind=PROFILE, arclength=True)
    info = {"lambda": float(lam), "kind": "angenent", "half_length": float(s_half * scale),
            "outer_radius": float(half[-1, 0] * scale)}
    return ShootResult(curve, r0 * scale, defect * scale, 1, bool(defect * scale < tol), info)


def profile_ode_residual(curve: SampledCurve, lam: float) -> float:
    """max |phi' - 2 lam (r sin phi - z cos phi) + sin phi / r| on a uniform closed profile."""
    pts = curve.points
    d1, d2 = _unit_speed_derivatives(pts, curve.length)
    r, z = pts[:, 0], pts[:, 1]
    cphi, sphi = d1[:, 0], d1[:, 1]
    curv = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    return float(np.max(np.abs(curv - 2.0 * lam * (r * sphi - z * cphi) + sphi / r)))


# ---------------------------------------------------------------------------
# Surfaces of revolution
# ---------------------------------------------------------------------------

def revolve_profile(profile: SampledCurve):
    """Patch (r(s) cos t, r(s) sin t, z(s)) with s the chord length of the samples.

    r and z come from a cubic spline (periodic for closed profiles,
    natural ends otherwise); second-order jets in s are taken from the
    spline derivatives.

    Raises
    ------
    DegenerateJetError
        If the profile touches the axis.
    """
    if profile.kind != PROFILE:
        raise ValueError("revolve_profile needs an (r, z) profile")
    if np.any(profile.points[:, 0] <= 0):
        raise DegenerateJetError("profile touches the axis")
    sp = profile.spline()
    d1, d2 = sp.derivative(1), sp.derivative(2)
    span = profile.length if profile.closed else profile.s[-1]

    def lift(s, j):
        if isinstance(s, Dual2):
            v = s.v
            if profile.closed:
                v = np.mod(v, span)
            return s.apply(sp(v)[..., j], d1(v)[..., j], d2(v)[..., j])
        v = np.mod(s, span) if profile.closed else s
        return sp(v)[..., j]

    def patch(s, t):
        r = lift(s, 0)
        return (r * dm.cos(t), r * dm.sin(t), lift(s, 1))

    patch.span = span
    return patch
