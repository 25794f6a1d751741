"""Ruled surfaces ``X(s, t) = gamma(s) t + p(s)`` as pointwise jets.

``gamma`` is a unit-speed curve on S^2 with frame (e1, e2, e3) =
(gamma, gamma', gamma x gamma') obeying e1' = e2, e2' = k e3 - e1,
e3' = -k e2, and p = a e2 + b e3. Along a ruling the residual of the
self-similar equation is an exact cubic in t; :func:`ruled_residual_poly`
returns its four coefficients.

Sign bookkeeping in the frame (det(e1, e2, e3) = +1):

    F = -a, fbar = b' + k a (so -2 fbar F = 2a(b' + k a)),
    det(gamma'', gamma', gamma) = -k, det(p, gamma', gamma) = -b,
    det(X, X_s, X_t) = -b t + a b' - b a' + k (a^2 + b^2).

Hence c3 = -2 lambda b and, with b = 0, c2 = -k + 2 lambda k a^2.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

import numpy as np

from .geometry import shrinker_residual
from .numerics import ImmersionJet2


@dataclass(frozen=True)
class RuledJet:
    k: float
    kp: float
    a: float
    ap: float
    app: float
    b: float
    bp: float
    bpp: float

    def __post_init__(self):
        if not all(np.isfinite(getattr(self, f.name)) for f in fields(self)):
            raise ValueError("jet entries must be finite")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RuledJet":
        names = [f.name for f in fields(cls)]
        missing = [n for n in names if n not in d]
        if missing:
            raise ValueError(f"ruled jet missing keys: {missing}")
        extra = sorted(set(d) - set(names))
        if extra:
            raise ValueError(f"unknown ruled jet keys: {extra}")
        return cls(**{n: float(d[n]) for n in names})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class PolyInT:
    c0: float
    c1: float
    c2: float
    c3: float

    def __call__(self, t):
        return self.c0 + t * (self.c1 + t * (self.c2 + t * self.c3))

    def as_array(self) -> np.ndarray:
        return np.array([self.c0, self.c1, self.c2, self.c3])

    def to_dict(self) -> dict:
        return asdict(self)


def random_ruled_jet(rng: np.random.Generator, b_zero: bool = False, a_const: bool = False) -> RuledJet:
    """Entries uniform in [-1, 1]; optionally b = b' = b'' = 0 and a' = a'' = 0."""
    d = {f.name: float(rng.uniform(-1.0, 1.0)) for f in fields(RuledJet)}
    if b_zero:
        d.update(b=0.0, bp=0.0, bpp=0.0)
    if a_const:
        d.update(ap=0.0, app=0.0)
    return RuledJet(**d)


def _frame_generator(k):
    # d/ds of coordinates in (e1, e2, e3): V' + Omega V
    return np.array([[0.0, -1.0, 0.0], [1.0, 0.0, -k], [0.0, k, 0.0]])


def directrix_derivatives(rj: RuledJet):
    """p, p', p'' in frame coordinates."""
    V = np.array([0.0, rj.a, rj.b])
    V1 = np.array([0.0, rj.ap, rj.bp])
    V2 = np.array([0.0, rj.app, rj.bpp])
    Om = _frame_generator(rj.k)
    Om1 = _frame_generator(rj.kp) - _frame_generator(0.0)
    p1 = V1 + Om @ V
    p2 = V2 + Om1 @ V + 2.0 * Om @ V1 + Om @ Om @ V
    return V, p1, p2


def ruled_residual_poly(rj: RuledJet, lam: float) -> PolyInT:
    """Coefficients of the residual ebar G + gbar E - 2 fbar F + 2 lam W det as a cubic in t."""
    k, a, b = rj.k, rj.a, rj.b
    _, p1, p2 = directrix_derivatives(rj)
    A = p1[1]  # a' - k b
    B = p1[2]  # b' + k a
    # det(p'', gamma', gamma) and det(p'', p', gamma) via u . (v x e1)
    d_pp_g1 = -p2[2]
    d_pp_p1 = B * p2[1] - A * p2[2]
    # ebar = -k t^2 + t(-k A + det(p'', gamma', gamma)) + det(p'', p', gamma)
    e2, e1, e0 = -k, -k * A + d_pp_g1, d_pp_p1
    f_term = 2.0 * a * B  # -2 fbar F with fbar = B, F = -a
    # W = t^2 + 2 A t + A^2 + B^2 ; det = -b t + D0
    D0 = a * rj.bp - b * rj.ap + k * (a * a + b * b)
    w2, w1, w0 = 1.0, 2.0 * A, A * A + B * B
    d1, d0 = -b, D0
    return PolyInT(
        c0=e0 + f_term + 2.0 * lam * w0 * d0,
        c1=e1 + 2.0 * lam * (w1 * d0 + w0 * d1),
        c2=e2 + 2.0 * lam * (w2 * d0 + w1 * d1),
        c3=2.0 * lam * w2 * d1,
    )


def ruled_immersion_jet(rj: RuledJet, t) -> ImmersionJet2:
    """Jet of X = gamma t + p with the frame at the evaluation point set to the standard basis."""
    t = np.asarray(t, dtype=float)
    P, p1, p2 = directrix_derivatives(rj)
    e1 = np.array([1.0, 0.0, 0.0])
    e2 = np.array([0.0, 1.0, 0.0])
    g2 = np.array([-1.0, 0.0, rj.k])  # gamma'' = k e3 - e1

    def col(v):
        return v.reshape((3,) + (1,) * t.ndim)

    ones = np.ones_like(t)
    return ImmersionJet2(
        col(e1) * t + col(P) * ones,
        col(e2) * t + col(p1) * ones,
        col(e1) * ones,
        col(g2) * t + col(p2) * ones,
        col(e2) * ones,
        0.0 * col(e1) * ones,
    )


def vandermonde_residual_poly(rj: RuledJet, lam: float, nodes=(-1.5, -0.5, 0.5, 1.5)) -> PolyInT:
    """Cubic coefficients recovered from residual values at four rulings points."""
    t = np.asarray(nodes, dtype=float)
    vals = shrinker_residual(ruled_immersion_jet(rj, t), lam)
    c = np.linalg.solve(np.vander(t, 4, increasing=True), vals)
    return PolyInT(*map(float, c))


def closed_form_poly(rj: RuledJet, lam: float) -> PolyInT:
    """The cubic as it is usually displayed: det = b t + ..., ebar t^2 coefficient +k.

    Kept for comparison; it disagrees with :func:`ruled_residual_poly`
    in the signs noted in the module docstring.
    """
    k, a, b = rj.k, rj.a, rj.b
    _, p1, p2 = directrix_derivatives(rj)
    A, B = p1[1], p1[2]
    d_pp_g1 = p2[2]  # sign convention of the displayed formula
    d_pp_p1 = B * p2[1] - A * p2[2]
    e2, e1, e0 = k, -k * A + d_pp_g1, d_pp_p1
    f_term = 2.0 * a * B
    D0 = a * rj.bp - b * rj.ap + k * (a * a + b * b)
    w2, w1, w0 = 1.0, 2.0 * A, A * A + B * B
    d1, d0 = b, D0
    return PolyInT(
        c0=e0 + f_term + 2.0 * lam * w0 * d0,
        c1=e1 + 2.0 * lam * (w1 * d0 + w0 * d1),
        c2=e2 + 2.0 * lam * (w2 * d0 + w1 * d1),
        c3=2.0 * lam * w2 * d1,
    )


def ruled_identity_check(rj: RuledJet):
    """Deviations of det(p'', gamma', gamma) from a k' and of det(p'', p', gamma) from -a^2 k (1 + k^2).

    Valid for constant a and b = 0. In the frame p'' = -a(1 + k^2) e2 + a k' e3,
    so the first determinant equals -a k' and ``d1 = -2 a k'``; ``d2`` is 0.
    """
    if any(abs(v) > 0.0 for v in (rj.b, rj.bp, rj.bpp, rj.ap, rj.app)):
        raise ValueError("identity check needs b = b' = b'' = 0 and a' = a'' = 0")
    _, p1, p2 = directrix_derivatives(rj)
    det_g = float(np.linalg.det(np.column_stack([p2, [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])))
    det_p = float(np.linalg.det(np.column_stack([p2, p1, [1.0, 0.0, 0.0]])))
    a, k = rj.a, rj.k
    return det_g - a * rj.kp, det_p + a * a * k * (1.0 + k * k)


# ---------------------------------------------------------------------------
# Deduction chain
# ---------------------------------------------------------------------------

CYLINDER = "CylinderOverPlanarShrinker"
PLANE = "Plane"


class InconsistentJetsError(ValueError):
    """A jet stream claimed self-similar violates a forced coefficient identity."""

    def __init__(self, step: str, message: str, witness: dict):
        super().__init__(f"{step}: {message}")
        self.step = step
        self.witness = witness


def theorem2_classify(jets=None, lam: float = 1.0, rulings_parallel: bool = False, tol: float = 1e-9) -> dict:
    """Follow the coefficient chain for a stream of jets of one surface.

    Parallel rulings give a cylinder over a planar curve (its profile must
    solve the planar shrinker equation, see :mod:`selfsim.solutions`).
    Otherwise each coefficient of the cubic must vanish at every jet:
    c3 = -2 lambda b forces b = 0; c2 = k(2 lambda a^2 - 1) forces k = 0
    (a plane) or 2 lambda a^2 = 1 with a constant; c1 = -a k' forces k
    constant; the constant term then reduces to a^2 k, forcing k = 0.

    Returns a report ``{"verdict", "steps"}``; raises
    :class:`InconsistentJetsError` when the stream contradicts a step.
    """
    if rulings_parallel:
        return {"verdict": CYLINDER, "steps": ["rulings parallel: cylinder over a planar curve"]}
    jets = list(jets or [])
    if not jets:
        raise ValueError("need at least one jet when rulings are not parallel")
    scale = max(1.0, max(abs(getattr(j, f.name)) for j in jets for f in fields(j)))
    eps = tol * scale

    def small(x):
        return abs(x) <= eps

    steps = []
    bad = [i for i, j in enumerate(jets) if not (small(j.b) and small(j.bp) and small(j.bpp))]
    if bad:
        raise InconsistentJetsError("c3", "c3 = -2 lambda b must vanish but b != 0",
                                    {"jets": bad, "c3": [ruled_residual_poly(jets[i], lam).c3 for i in bad]})
    steps.append("c3 = -2 lambda b = 0 => b = 0")
    if all(small(j.k) and small(j.kp) for j in jets):
        steps.append("c2 = k (2 lambda a^2 - 1) = 0 with k = 0: gamma is a great circle, surface is planar")
        return {"verdict": PLANE, "steps": steps}
    curved = [j for j in jets if not small(j.k)]
    bad = [j.to_dict() for j in curved
           if not (abs(2.0 * lam * j.a * j.a - 1.0) <= tol and small(j.ap) and small(j.app))]
    if bad:
        raise InconsistentJetsError("c2", "k != 0 requires 2 lambda a^2 = 1 with a constant", {"jets": bad})
    steps.append("c2 = 0 with k != 0 => 2 lambda a^2 = 1, a constant (lambda > 0)")
    bad = [j.to_dict() for j in curved if not small(j.kp)]
    if bad:
        raise InconsistentJetsError("c1", "c1 = -a k' must vanish", {"jets": bad})
    steps.append("c1 = -a k' = 0 => k constant")
    c0 = [ruled_residual_poly(j, lam).c0 for j in curved]
    steps.append("c0 = a^2 k (1 - k^2 + 2 lambda k^2 a^2) = a^2 k")
    raise InconsistentJetsError("c0", "constant term a^2 k must vanish but k != 0",
                                {"c0": c0, "a2k": [j.a * j.a * j.k for j in curved], "steps": steps})
