"""Fundamental forms, mean curvature, support function and the shrinker residual.

Conventions: N = X_s x X_t / |X_s x X_t| and the unnormalised second form
ebar = <X_ss, X_s x X_t>, etc. For a surface with ``H + lambda <X, N> = 0``
the residual

    ebar G + gbar E - 2 fbar F + 2 lambda (EG - F^2) det(X, X_s, X_t)

vanishes identically. No global orientation is imposed; every derived check
is orientation-robust.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics as dm
from .numerics import ImmersionJet2, Patch, eval_jet2

REGULARITY_EPS = 1e-12
DETX_EPS = 1e-8


class DegenerateJetError(ValueError):
    """The jet is not an immersion (EG - F^2 below the regularity threshold)."""


class IndeterminateLambdaError(ValueError):
    """det(X, X_s, X_t) vanishes on the whole sample set (minimal candidate)."""


def _dot(u, v):
    return np.einsum("i...,i...->...", u, v)


def _cross(u, v):
    return np.cross(u, v, axis=0)


def _scale(jet: ImmersionJet2) -> np.ndarray:
    """Per-point length scale: largest coordinate magnitude of X and its first partials."""
    mags = [np.max(np.abs(v), axis=0) for v in (jet.X, jet.X_s, jet.X_t)]
    return np.maximum.reduce(mags)


@dataclass(frozen=True, eq=False)
class FormData:
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    ebar: np.ndarray
    fbar: np.ndarray
    gbar: np.ndarray
    detX: np.ndarray
    W: np.ndarray

    @property
    def e(self):
        return self.ebar / np.sqrt(self.W)

    @property
    def f(self):
        return self.fbar / np.sqrt(self.W)

    @property
    def g(self):
        return self.gbar / np.sqrt(self.W)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("E", "F", "G", "ebar", "fbar", "gbar", "detX", "W")}


def fundamental_data(jet: ImmersionJet2, check: bool = True) -> FormData:
    """First form, unnormalised second form, det(X, X_s, X_t) and W = EG - F^2.

    Raises
    ------
    DegenerateJetError
        If W <= 1e-12 * scale^4 at any point (scale = largest coordinate of
        X, X_s, X_t there) when ``check`` is true.
    """
    n = _cross(jet.X_s, jet.X_t)
    E = _dot(jet.X_s, jet.X_s)
    F = _dot(jet.X_s, jet.X_t)
    G = _dot(jet.X_t, jet.X_t)
    W = _dot(n, n)
    if check:
        sc = _scale(jet)
        if np.any(W <= REGULARITY_EPS * sc ** 4):
            raise DegenerateJetError("EG - F^2 vanishes: patch is not regular here")
    return FormData(E, F, G, _dot(jet.X_ss, n), _dot(jet.X_st, n), _dot(jet.X_tt, n), _dot(jet.X, n), W)


def mean_curvature_and_support(fd: FormData):
    """Mean curvature H and support function <X, N>.

    H = (ebar G + gbar E - 2 fbar F) / (2 W^{3/2}) and <X, N> = detX / sqrt(W).
    """
    if np.any(fd.W <= 0):
        raise DegenerateJetError("EG - F^2 must be positive")
    root = np.sqrt(fd.W)
    H = (fd.ebar * fd.G + fd.gbar * fd.E - 2.0 * fd.fbar * fd.F) / (2.0 * fd.W * root)
    return H, fd.detX / root


def residual_from_forms(fd: FormData, lam: float):
    return fd.ebar * fd.G + fd.gbar * fd.E - 2.0 * fd.fbar * fd.F + 2.0 * lam * fd.W * fd.detX


def shrinker_residual(jet: ImmersionJet2, lam: float):
    """Left side of the self-similar equation at every point of ``jet``."""
    return residual_from_forms(fundamental_data(jet), lam)


def pointwise_lambda(fd: FormData):
    """The lambda that zeroes the residual at each point (nan where detX = 0)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return -(fd.ebar * fd.G + fd.gbar * fd.E - 2.0 * fd.fbar * fd.F) / (2.0 * fd.W * fd.detX)


def grid(ns: int, nt: int, s_range, t_range, endpoint_s: bool = True, endpoint_t: bool = False):
    s = np.linspace(s_range[0], s_range[1], ns, endpoint=endpoint_s)
    t = np.linspace(t_range[0], t_range[1], nt, endpoint=endpoint_t)
    return np.meshgrid(s, t, indexing="ij")


def fit_lambda(patch: Patch, s, t):
    """Invert the residual equation pointwise and average.

    Points where |detX| < 1e-8 * scale^3 are excluded. Returns
    ``(lambda, spread)`` where spread is the largest deviation from the
    mean; spread ~ 0 certifies self-similarity on the sample set.

    Raises
    ------
    IndeterminateLambdaError
        If no sample has a usable detX (e.g. a plane through the origin).
    """
    jet = eval_jet2(patch, s, t)
    fd = fundamental_data(jet)
    keep = np.abs(fd.detX) >= DETX_EPS * _scale(jet) ** 3
    if not np.any(keep):
        raise IndeterminateLambdaError("det(X, X_s, X_t) vanishes at every sample")
    lams = pointwise_lambda(fd)[keep]
    lam = float(np.mean(lams))
    return lam, float(np.max(np.abs(lams - lam)))


# ---------------------------------------------------------------------------
# Standard charts, written with the Dual2-aware elementary functions
# ---------------------------------------------------------------------------

def sphere_patch(R: float = 1.0) -> Patch:
    """(R sin s cos t, R sin s sin t, R cos s); regular for 0 < s < pi."""
    def patch(s, t):
        ss = dm.sin(s)
        return (R * ss * dm.cos(t), R * ss * dm.sin(t), R * dm.cos(s))
    return patch


def cylinder_patch(r: float = 1.0) -> Patch:
    """(r cos t, r sin t, s), axis along z."""
    def patch(s, t):
        return (r * dm.cos(t), r * dm.sin(t), s)
    return patch


def plane_patch(offset: float = 0.0) -> Patch:
    """(s, t, offset)."""
    def patch(s, t):
        return (s, t, offset + 0.0 * s)
    return patch


def graph_patch(h) -> Patch:
    """(s, t, h(s, t)) for a Dual2-aware height function ``h``."""
    def patch(s, t):
        return (s, t, h(s, t))
    return patch


def torus_patch(a: float, b: float) -> Patch:
    """Torus of revolution: tube radius b about a circle of radius a in the xy-plane."""
    def patch(s, t):
        r = a + b * dm.cos(s)
        return (r * dm.cos(t), r * dm.sin(t), b * dm.sin(s))
    return patch


def scaled_patch(patch: Patch, c: float) -> Patch:
    def scaled(s, t):
        return tuple(c * x for x in patch(s, t))
    return scaled
