"""Numeric kernels: second-order jets, Fourier extraction, IVP integration, root finding.

All routines are pure functions of their inputs. ``Dual2`` components may be
floats or equally shaped numpy arrays, so a whole (s, t) grid can be pushed
through a patch expression in one call.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


class DomainError(ValueError):
    """Raised when an elementary function is evaluated outside its domain."""


class IntegrationError(RuntimeError):
    """Raised when an IVP integration produces a non-finite state.

    ``trajectory`` holds everything computed up to the last good state.
    """

    def __init__(self, message: str, trajectory: "Trajectory"):
        super().__init__(message)
        self.trajectory = trajectory


class BracketError(ValueError):
    """Raised when a root bracket shows no sign change."""


# ---------------------------------------------------------------------------
# Second-order jets in two variables
# ---------------------------------------------------------------------------

class Dual2:
    """Value plus all first and second partials with respect to (s, t).

    Arithmetic propagates the product and chain rules exactly, so seeding
    ``s`` and ``t`` with :meth:`seed_s` / :meth:`seed_t` yields exact
    partials of any composite expression.
    """

    __slots__ = ("v", "s", "t", "ss", "st", "tt")

    def __init__(self, v, s=0.0, t=0.0, ss=0.0, st=0.0, tt=0.0):
        self.v = v
        self.s = s
        self.t = t
        self.ss = ss
        self.st = st
        self.tt = tt

    @classmethod
    def seed_s(cls, value) -> "Dual2":
        one = np.ones_like(value, dtype=float) if np.ndim(value) else 1.0
        return cls(value, one, 0.0 * one, 0.0 * one, 0.0 * one, 0.0 * one)

    @classmethod
    def seed_t(cls, value) -> "Dual2":
        one = np.ones_like(value, dtype=float) if np.ndim(value) else 1.0
        return cls(value, 0.0 * one, one, 0.0 * one, 0.0 * one, 0.0 * one)

    @staticmethod
    def lift(x) -> "Dual2":
        return x if isinstance(x, Dual2) else Dual2(x)

    def partials(self) -> tuple:
        return (self.v, self.s, self.t, self.ss, self.st, self.tt)

    def __repr__(self) -> str:
        return f"Dual2(v={self.v}, s={self.s}, t={self.t}, ss={self.ss}, st={self.st}, tt={self.tt})"

    # -- chain rule for a scalar function with known f, f', f''
    def apply(self, f0, f1, f2) -> "Dual2":
        s, t = self.s, self.t
        return Dual2(
            f0,
            f1 * s,
            f1 * t,
            f2 * s * s + f1 * self.ss,
            f2 * s * t + f1 * self.st,
            f2 * t * t + f1 * self.tt,
        )

    def __add__(self, other):
        if isinstance(other, Dual2):
            return Dual2(self.v + other.v, self.s + other.s, self.t + other.t,
                         self.ss + other.ss, self.st + other.st, self.tt + other.tt)
        return Dual2(self.v + other, self.s, self.t, self.ss, self.st, self.tt)

    __radd__ = __add__

    def __neg__(self):
        return Dual2(-self.v, -self.s, -self.t, -self.ss, -self.st, -self.tt)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dual2):
            a, b = self, other
            return Dual2(
                a.v * b.v,
                a.s * b.v + a.v * b.s,
                a.t * b.v + a.v * b.t,
                a.ss * b.v + 2.0 * a.s * b.s + a.v * b.ss,
                a.st * b.v + a.s * b.t + a.t * b.s + a.v * b.st,
                a.tt * b.v + 2.0 * a.t * b.t + a.v * b.tt,
            )
        return Dual2(self.v * other, self.s * other, self.t * other,
                     self.ss * other, self.st * other, self.tt * other)

    __rmul__ = __mul__

    def reciprocal(self) -> "Dual2":
        if np.any(np.asarray(self.v) == 0.0):
            raise DomainError("division by zero in Dual2")
        inv = 1.0 / self.v
        return self.apply(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        if isinstance(other, Dual2):
            return self * other.reciprocal()
        return self * (1.0 / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, Dual2):
            raise TypeError("Dual2 exponent must be a real constant")
        v = self.v
        if float(n).is_integer():
            n = int(n)
            if n == 0:
                return 0.0 * self + 1.0
            if n < 0 and np.any(np.asarray(v) == 0.0):
                raise DomainError("negative power of zero")
            f1 = n * v ** (n - 1) if n != 1 else 1.0 + 0.0 * v
            f2 = n * (n - 1) * v ** (n - 2) if n not in (1, 2) else (2.0 if n == 2 else 0.0) + 0.0 * v
            return self.apply(v ** n, f1, f2)
        if np.any(np.asarray(v) <= 0.0):
            raise DomainError(f"non-integer power {n} of a non-positive value")
        return self.apply(v ** n, n * v ** (n - 1), n * (n - 1) * v ** (n - 2))


def _is_dual(x) -> bool:
    return isinstance(x, Dual2)


def sin(x):
    if _is_dual(x):
        sv, cv = np.sin(x.v), np.cos(x.v)
        return x.apply(sv, cv, -sv)
    return np.sin(x)


def cos(x):
    if _is_dual(x):
        sv, cv = np.sin(x.v), np.cos(x.v)
        return x.apply(cv, -sv, -cv)
    return np.cos(x)


def sqrt(x):
    v = x.v if _is_dual(x) else x
    if np.any(np.asarray(v) < 0.0):
        raise DomainError("sqrt of a negative value")
    if _is_dual(x):
        if np.any(np.asarray(v) == 0.0):
            raise DomainError("sqrt is not differentiable at 0")
        r = np.sqrt(v)
        return x.apply(r, 0.5 / r, -0.25 / (r * v))
    return np.sqrt(v)


def exp(x):
    if _is_dual(x):
        e = np.exp(x.v)
        return x.apply(e, e, e)
    return np.exp(x)


def log(x):
    v = x.v if _is_dual(x) else x
    if np.any(np.asarray(v) <= 0.0):
        raise DomainError("log of a non-positive value")
    if _is_dual(x):
        return x.apply(np.log(v), 1.0 / v, -1.0 / (v * v))
    return np.log(v)


# ---------------------------------------------------------------------------
# Surface patch jets
# ---------------------------------------------------------------------------

Patch = Callable[[object, object], Sequence[object]]


@dataclass(frozen=True, eq=False)
class ImmersionJet2:
    """Position and first/second partials of a patch X(s, t).

    Each field has shape ``(3,)`` for a single point or ``(3, ...)`` for a
    grid of points.
    """

    X: np.ndarray
    X_s: np.ndarray
    X_t: np.ndarray
    X_ss: np.ndarray
    X_st: np.ndarray
    X_tt: np.ndarray

    def scaled(self, c: float) -> "ImmersionJet2":
        return ImmersionJet2(*(c * v for v in self.vectors()))

    def swapped(self) -> "ImmersionJet2":
        """Jet of the same surface with the roles of s and t exchanged."""
        return ImmersionJet2(self.X, self.X_t, self.X_s, self.X_tt, self.X_st, self.X_ss)

    def vectors(self) -> tuple:
        return (self.X, self.X_s, self.X_t, self.X_ss, self.X_st, self.X_tt)


def _component(c, shape):
    if isinstance(c, Dual2):
        parts = c.partials()
    else:
        parts = (c, 0.0, 0.0, 0.0, 0.0, 0.0)
    return [np.broadcast_to(np.asarray(p, dtype=float), shape) for p in parts]


def eval_jet2(patch: Patch, s, t) -> ImmersionJet2:
    """Evaluate a patch and its five partial derivative vectors at (s, t).

    ``patch(s, t)`` must return three coordinates built from ``Dual2``
    arithmetic and the elementary functions of this module. ``s`` and ``t``
    may be scalars or broadcast-compatible arrays.

    Raises
    ------
    DomainError
        If the expression leaves the domain of an elementary function.
    """
    s_arr, t_arr = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    shape = s_arr.shape
    S = Dual2.seed_s(s_arr if shape else float(s_arr))
    T = Dual2.seed_t(t_arr if shape else float(t_arr))
    with np.errstate(invalid="raise", divide="raise"):
        try:
            coords = patch(S, T)
        except FloatingPointError as exc:
            raise DomainError(str(exc)) from exc
    comps = [_component(c, shape) for c in coords]
    stacked = [np.stack([comps[i][k] for i in range(3)]) for k in range(6)]
    for arr in stacked:
        if not np.all(np.isfinite(arr)):
            raise DomainError("patch evaluation produced non-finite values")
    return ImmersionJet2(*stacked)


# ---------------------------------------------------------------------------
# Fourier extraction
# ---------------------------------------------------------------------------

def fourier_extract(f: Callable, order: int, samples: int | None = None):
    """Trigonometric coefficients of a 2π-periodic function up to ``order``.

    Uses ``4 * (order + 2)`` uniform samples unless ``samples`` is given
    (at least ``2 * order + 3``). Exact, up to rounding, on trigonometric
    polynomials whose degree is below ``samples - order``.

    ``f`` is called once with the array of sample points; a scalar-only
    callable is detected and evaluated pointwise.
    """
    from .trig_poly import TrigPoly

    if order < 0:
        raise ValueError(f"order must be non-negative, got {order}")
    n = int(order)
    N = 4 * (n + 2) if samples is None else int(samples)
    if N < 2 * n + 3:
        raise ValueError(f"need at least {2 * n + 3} samples for order {n}, got {N}")
    t = 2.0 * np.pi * np.arange(N) / N
    try:
        vals = np.asarray(f(t), dtype=float)
        if vals.shape != t.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(f(ti)) for ti in t])
    F = np.fft.rfft(vals)
    a = np.empty(n + 1)
    b = np.empty(n)
    a[0] = F[0].real / N
    a[1:] = 2.0 * F[1:n + 1].real / N
    b[:] = -2.0 * F[1:n + 1].imag / N
    return TrigPoly(a, b, scale=float(np.max(np.abs(vals))) if N else 0.0)


# ---------------------------------------------------------------------------
# Initial value problems
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _rk4_fixed(field, y0, t0, t1, n):
    h = (t1 - t0) / n
    ts = t0 + h * np.arange(n + 1)
    ys = np.empty((n + 1, y0.size))
    ys[0] = y = y0
    for i in range(n):
        t = ts[i]
        k1 = field(t, y)
        k2 = field(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = field(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = field(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise IntegrationError(f"non-finite state at t={ts[i + 1]:.6g}",
                                   Trajectory(ts[: i + 1].copy(), ys[: i + 1].copy()))
        ys[i + 1] = y
    return Trajectory(ts, ys)


def integrate_ivp(field: Callable, y0, span: Sequence[float], tol: float = 1e-10,
                  min_steps: int = 10_000, max_steps: int = 2_000_000) -> Trajectory:
    """Classical fixed-step RK4 with a Richardson error check.

    Starts from ``min_steps`` uniform steps and doubles the step count
    until the difference between the n- and 2n-step endpoints, divided by
    15, is below ``tol`` (relative to ``max(1, |y|)``). Returns the finer of
    the last two runs. Deterministic for fixed inputs.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    t0, t1 = float(span[0]), float(span[1])
    if not t1 > t0:
        raise ValueError("span must be increasing")
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))

    def fld(t, y):
        return np.asarray(field(t, y), dtype=float)

    n = max(1, int(min_steps))
    coarse = _rk4_fixed(fld, y0, t0, t1, n)
    while True:
        fine = _rk4_fixed(fld, y0, t0, t1, 2 * n)
        est = np.max(np.abs(fine.final - coarse.final)) / 15.0
        if est <= tol * max(1.0, float(np.max(np.abs(fine.final)))):
            return fine
        n *= 2
        if 2 * n > max_steps:
            raise IntegrationError(f"step count limit reached (error estimate {est:.3g})", fine)
        coarse = fine


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

def bracket_root(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
                 max_iter: int = 200) -> float:
    """Bisection for a sign change of ``f`` on ``[lo, hi]``.

    Returns the midpoint of the final bracket once its width is below
    ``tol``. An exact zero at ``lo`` wins over one at ``hi``.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if not (np.isfinite(flo) and np.isfinite(fhi)) or math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi)
