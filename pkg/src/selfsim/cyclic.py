"""Cyclic (circle-foliated) surfaces as pointwise jets.

A cyclic surface is written ``X(s, t) = R (n cos t + b sin t) + z`` with
``(t, n, b)`` the Frenet frame of a curve whose tangent is the normal of the
circle plane, and ``z = p t + q n + r b`` the circle centre. Everything is
evaluated in Frenet coordinates at one parameter value, so the trigonometric
expansions in the circle variable can be extracted and compared against
closed forms without integrating the frame.

The parallel-circle family ``(a(s) + R cos t, b(s) + R sin t, s)`` is handled
by :func:`parallel_circle_analysis`.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .geometry import fundamental_data, residual_from_forms
from .numerics import ImmersionJet2, fourier_extract
from .trig_poly import TrigPoly, coeff, is_zero

K_EPS = 1e-6


class FrameDegenerateError(ValueError):
    """Curvature of the centre curve too small for a Frenet frame."""


@dataclass(frozen=True)
class CyclicJet:
    k: float
    kp: float
    tau: float
    taup: float
    R: float
    Rp: float
    Rpp: float
    p: float
    pp: float
    ppp: float
    q: float
    qp: float
    qpp: float
    r: float
    rp: float
    rpp: float

    def __post_init__(self):
        vals = np.array([getattr(self, f.name) for f in fields(self)], dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError("jet entries must be finite")
        if self.R <= 0:
            raise ValueError(f"circle radius must be positive, got R={self.R}")
        if self.k < 0:
            raise ValueError(f"Frenet curvature must be non-negative, got k={self.k}")

    # coordinates of z' in the Frenet frame and their derivatives
    @property
    def alpha(self) -> float:
        return self.pp - self.k * self.q

    @property
    def beta(self) -> float:
        return self.qp + self.p * self.k - self.tau * self.r

    @property
    def gamma(self) -> float:
        return self.rp + self.tau * self.q

    @property
    def alpha_p(self) -> float:
        return self.ppp - self.kp * self.q - self.k * self.qp

    @property
    def beta_p(self) -> float:
        return (self.qpp + self.pp * self.k + self.p * self.kp
                - self.taup * self.r - self.tau * self.rp)

    @property
    def gamma_p(self) -> float:
        return self.rpp + self.taup * self.q + self.tau * self.qp

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "CyclicJet":
        names = [f.name for f in fields(cls)]
        missing = [n for n in names if n not in d]
        if missing:
            raise ValueError(f"cyclic jet missing keys: {missing}")
        extra = sorted(set(d) - set(names))
        if extra:
            raise ValueError(f"unknown cyclic jet keys: {extra}")
        return cls(**{n: float(d[n]) for n in names})

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "CyclicJet":
        return cls.from_dict(json.loads(text))


def _frenet_generator(k, tau):
    # d/ds of coordinates in (t, n, b): V' + Omega V
    return np.array([[0.0, -k, 0.0], [k, 0.0, -tau], [0.0, tau, 0.0]])


def cyclic_immersion_jet(cj: CyclicJet, t) -> ImmersionJet2:
    """Jet of the cyclic immersion at circle angle(s) ``t``, in Frenet coordinates.

    X = (p, q + R cos t, r + R sin t); s-derivatives of frame coordinates
    pick up the Frenet rotation: X_s = V' + Omega V and
    X_ss = V'' + Omega' V + 2 Omega V' + Omega^2 V.
    """
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    z = np.zeros_like(t)
    V = np.stack([cj.p + z, cj.q + cj.R * c, cj.r + cj.R * s])
    V1 = np.stack([cj.pp + z, cj.qp + cj.Rp * c, cj.rp + cj.Rp * s])
    V2 = np.stack([cj.ppp + z, cj.qpp + cj.Rpp * c, cj.rpp + cj.Rpp * s])
    Vt = np.stack([z, -cj.R * s, cj.R * c])
    V1t = np.stack([z, -cj.Rp * s, cj.Rp * c])
    Vtt = np.stack([z, -cj.R * c, -cj.R * s])
    Om = _frenet_generator(cj.k, cj.tau)
    Om1 = _frenet_generator(cj.kp, cj.taup)

    def mv(M, v):
        return np.tensordot(M, v, axes=1)

    X_s = V1 + mv(Om, V)
    X_ss = V2 + mv(Om1, V) + 2.0 * mv(Om, V1) + mv(Om @ Om, V)
    X_st = V1t + mv(Om, Vt)
    return ImmersionJet2(V, X_s, Vt, X_ss, X_st, Vtt)


# The expansions are polynomial in the jet entries, so isolated non-regular
# circle angles do not invalidate them; regularity is not enforced here.
def _lhs_values(cj: CyclicJet):
    def f(t):
        fd = fundamental_data(cyclic_immersion_jet(cj, t), check=False)
        return fd.ebar * fd.G + fd.gbar * fd.E - 2.0 * fd.fbar * fd.F
    return f


def _rhs_values(cj: CyclicJet):
    def f(t):
        fd = fundamental_data(cyclic_immersion_jet(cj, t), check=False)
        return fd.W * fd.detX / cj.R ** 3
    return f


def cyclic_lhs_poly(cj: CyclicJet, order: int = 3) -> TrigPoly:
    """Fourier coefficients of ebar G + gbar E - 2 fbar F in the circle angle."""
    return fourier_extract(_lhs_values(cj), order)


def cyclic_rhs_poly(cj: CyclicJet, order: int = 4) -> TrigPoly:
    """Fourier coefficients of R^-3 (EG - F^2) det(X, X_s, X_t) in the circle angle."""
    return fourier_extract(_rhs_values(cj), order)


def cyclic_residual_poly(cj: CyclicJet, lam: float, order: int = 4) -> TrigPoly:
    """lhs + 2 lambda R^3 rhs: the full residual as a polynomial in t."""
    return cyclic_lhs_poly(cj, order) + (2.0 * lam * cj.R ** 3) * cyclic_rhs_poly(cj, order)


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def closed_forms(cj: CyclicJet) -> dict:
    """Closed-form coefficients as quoted for this expansion.

    a_3, b_3 and a_2 agree with the extracted expansion. b_2 carries an R^3/3
    prefactor and a'_4, b'_4 are quoted without the kR/4 factor and with the
    opposite sign on the beta*gamma terms; see :func:`corrected_closed_forms`.
    """
    k, kp, R, Rp = cj.k, cj.kp, cj.R, cj.Rp
    al, be, ga = cj.alpha, cj.beta, cj.gamma
    P = 0.5 * (R * R * k * k - ga * ga + be * be)
    return {
        "a3": -(R ** 3 * k / 2.0) * (k * k * R * R + be * be - ga * ga),
        "b3": -k * R ** 3 * be * ga,
        "a2": (R ** 3 / 2.0) * (5.0 * al * k * k * R + cj.beta_p * k * R - be * kp * R - 6.0 * be * k * Rp),
        "b2": (R ** 3 / 3.0) * (cj.gamma_p * k * R - ga * kp * R - 6.0 * ga * k * Rp),
        "a4p": k * (P * cj.q + be * ga * cj.r),
        "b4p": k * (-be * ga * cj.q + P * cj.r),
    }


def corrected_closed_forms(cj: CyclicJet) -> dict:
    """Closed forms that match the extracted coefficients exactly.

    Differences from :func:`closed_forms`: b_2 has prefactor R^3/2, and the
    order-4 coefficients of R^-3 (EG - F^2) det are
    a'_4 = (kR/4)(P q - beta gamma r), b'_4 = (kR/4)(beta gamma q + P r)
    with P = (R^2 k^2 - gamma^2 + beta^2)/2.
    """
    out = closed_forms(cj)
    k, kp, R, Rp = cj.k, cj.kp, cj.R, cj.Rp
    be, ga = cj.beta, cj.gamma
    P = 0.5 * (R * R * k * k - ga * ga + be * be)
    Q = be * ga
    out["b2"] = (R ** 3 / 2.0) * (cj.gamma_p * k * R - ga * kp * R - 6.0 * ga * k * Rp)
    out["a4p"] = 0.25 * k * R * (P * cj.q - Q * cj.r)
    out["b4p"] = 0.25 * k * R * (Q * cj.q + P * cj.r)
    return out


def extracted_coefficients(cj: CyclicJet) -> dict:
    lhs = cyclic_lhs_poly(cj, 3)
    rhs = cyclic_rhs_poly(cj, 4)
    return {
        "a3": coeff(lhs, 3, "cos"),
        "b3": coeff(lhs, 3, "sin"),
        "a2": coeff(lhs, 2, "cos"),
        "b2": coeff(lhs, 2, "sin"),
        "a4p": coeff(rhs, 4, "cos"),
        "b4p": coeff(rhs, 4, "sin"),
    }


# ---------------------------------------------------------------------------
# Two-case decision for non-parallel circles
# ---------------------------------------------------------------------------

SPHERE_CASE = "SphereCase"
PARALLEL_REQUIRED = "ParallelRequired"
CONTRADICTION = "Contradiction"
NOT_SELF_SIMILAR = "NotSelfSimilar"


@dataclass
class CyclicClassification:
    verdict: str
    lam: float | None = None
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "lambda": self.lam, "witness": self.witness}


def _small(x, scale, tol):
    return abs(x) <= tol * max(1.0, scale)


def lemma2_classify(cj: CyclicJet, lambda_hint: float | None = None, tol: float = 1e-9) -> CyclicClassification:
    """Decide which branch of the circle-foliation argument a jet falls into.

    The order-4 coefficients a'_4, b'_4 of the right-hand side have no
    counterpart on the left (order 3), so they must vanish. They form a
    linear system in (q, r) with determinant proportional to
    P^2 + (beta gamma)^2.

    * Nonsingular system: a non-zero (q, r) means the equation cannot hold
      (``NotSelfSimilar``). Otherwise q, r and hence gamma vanish
      identically; a jet consistent with that is a ``SphereCase`` with
      lambda = -a_3 / (2 R^3 a'_3), anything else is a ``Contradiction``.
    * Singular system: beta = 0 and R^2 k^2 = gamma^2, and the chain through
      a'_3, b'_3 and a'_2, b'_2 ends in a ``Contradiction``.

    Raises
    ------
    FrameDegenerateError
        If k < 1e-6.
    """
    if cj.k < K_EPS:
        raise FrameDegenerateError(f"curvature k={cj.k} below {K_EPS}")
    lhs = cyclic_lhs_poly(cj, 4)
    rhs = cyclic_rhs_poly(cj, 4)
    R, k = cj.R, cj.k
    be, ga = cj.beta, cj.gamma
    P = 0.5 * (R * R * k * k - ga * ga + be * be)
    det = P * P + (be * ga) ** 2
    jet_scale = max(abs(getattr(cj, f.name)) for f in fields(cj))
    w = {
        "a4p": coeff(rhs, 4, "cos"),
        "b4p": coeff(rhs, 4, "sin"),
        "system_det": det,
        "alpha": cj.alpha,
        "beta": be,
        "gamma": ga,
    }
    rhs_scale = max(1.0, rhs.scale)

    if not _small(det, (R * k) ** 4, tol):
        if not (_small(w["a4p"], rhs_scale, tol) and _small(w["b4p"], rhs_scale, tol)):
            w["reason"] = "a'_4 or b'_4 non-zero while the left side has order 3"
            return CyclicClassification(NOT_SELF_SIMILAR, None, w)
        # q = r = 0 identically: their derivatives and gamma must vanish too
        forced = {"q": cj.q, "r": cj.r, "qp": cj.qp, "rp": cj.rp, "qpp": cj.qpp, "rpp": cj.rpp, "gamma": ga}
        bad = {n: v for n, v in forced.items() if not _small(v, jet_scale, tol)}
        if bad:
            w["reason"] = "q = r = 0 is forced identically but the jet violates it"
            w["violations"] = bad
            return CyclicClassification(CONTRADICTION, None, w)
        a3 = coeff(lhs, 3, "cos")
        a3p = coeff(rhs, 3, "cos")
        lam = -a3 / (2.0 * R ** 3 * a3p)
        w.update({"a3": a3, "a3p": a3p, "lambda_times_X2": lam * (R * R + cj.p * cj.p)})
        if lambda_hint is not None:
            w["lambda_hint"] = lambda_hint
            w["lambda_hint_error"] = lam - lambda_hint
        residual = lhs + (2.0 * lam * R ** 3) * rhs
        w["residual_max_coeff"] = float(max(np.max(np.abs(residual.a)), np.max(np.abs(residual.b))))
        return CyclicClassification(SPHERE_CASE, lam, w)

    # singular system: beta = 0, R^2 k^2 = gamma^2, so a_3 = b_3 = 0
    w.update({"a3": coeff(lhs, 3, "cos"), "b3": coeff(lhs, 3, "sin"),
              "a3p": coeff(rhs, 3, "cos"), "b3p": coeff(rhs, 3, "sin")})
    if not (_small(w["a3p"], rhs_scale, tol) and _small(w["b3p"], rhs_scale, tol)):
        w["reason"] = "a_3 = b_3 = 0 but a'_3 or b'_3 non-zero"
        return CyclicClassification(CONTRADICTION, None, w)
    w.update({"a2": coeff(lhs, 2, "cos"), "b2": coeff(lhs, 2, "sin"),
              "a2p": coeff(rhs, 2, "cos"), "b2p": coeff(rhs, 2, "sin")})
    if not (_small(w["a2p"], rhs_scale, tol) and _small(w["b2p"], rhs_scale, tol)):
        w["reason"] = "a_2 = b_2 = 0 forced but a'_2 = kRq gamma^2/2 or b'_2 = kRr gamma^2/2 non-zero"
        return CyclicClassification(CONTRADICTION, None, w)
    w["reason"] = "q = r = 0 forces gamma = 0, contradicting gamma^2 = R^2 k^2 > 0"
    return CyclicClassification(CONTRADICTION, None, w)


def random_cyclic_jet(rng: np.random.Generator, kind: str = "generic") -> CyclicJet:
    """A random jet with k in [0.3, 2], R in [0.5, 2] and the rest in [-1, 1].

    ``kind="sphere"`` sets q, r and their derivatives to zero (so a'_4 = b'_4 = 0
    and every later coefficient is driven by p alone). ``kind="forced"`` sets
    q = r = 0 only, which also kills a'_4, b'_4. ``kind="singular"`` makes
    the a'_4, b'_4 system singular (beta = 0, gamma = R k).
    """
    d = {f.name: float(rng.uniform(-1.0, 1.0)) for f in fields(CyclicJet)}
    d["k"] = float(rng.uniform(0.3, 2.0))
    d["R"] = float(rng.uniform(0.5, 2.0))
    if kind == "sphere":
        d.update(q=0.0, qp=0.0, qpp=0.0, r=0.0, rp=0.0, rpp=0.0)
    elif kind == "forced":
        d.update(q=0.0, r=0.0)
    elif kind == "singular":
        d["qp"] = d["tau"] * d["r"] - d["p"] * d["k"]
        d["rp"] = d["R"] * d["k"] - d["tau"] * d["q"]
    elif kind != "generic":
        raise ValueError(f"unknown jet kind {kind!r}")
    return CyclicJet(**d)


# ---------------------------------------------------------------------------
# Parallel circles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParallelCircleJet:
    a: float
    ap: float
    app: float
    b: float
    bp: float
    bpp: float
    R: float
    Rp: float
    Rpp: float
    s: float

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError(f"circle radius must be positive, got R={self.R}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ParallelCircleJet":
        names = [f.name for f in fields(cls)]
        missing = [n for n in names if n not in d]
        if missing:
            raise ValueError(f"parallel-circle jet missing keys: {missing}")
        extra = sorted(set(d) - set(names))
        if extra:
            raise ValueError(f"unknown parallel-circle jet keys: {extra}")
        return cls(**{n: float(d[n]) for n in names})


def random_parallel_jet(rng: np.random.Generator, linear: bool = False) -> "ParallelCircleJet":
    """Random parallel-circle jet; ``linear=True`` puts the centres on a line through the axis point."""
    d = {f.name: float(rng.uniform(-1.0, 1.0)) for f in fields(ParallelCircleJet)}
    d["R"] = float(rng.uniform(0.5, 2.0))
    if linear:
        d.update(a=d["ap"] * d["s"], b=d["bp"] * d["s"], app=0.0, bpp=0.0)
    return ParallelCircleJet(**d)


def parallel_circle_jet(pj: ParallelCircleJet, t) -> ImmersionJet2:
    t = np.asarray(t, dtype=float)
    c, s = np.cos(t), np.sin(t)
    z = np.zeros_like(t)
    R, Rp, Rpp = pj.R, pj.Rp, pj.Rpp
    return ImmersionJet2(
        np.stack([pj.a + R * c, pj.b + R * s, pj.s + z]),
        np.stack([pj.ap + Rp * c, pj.bp + Rp * s, 1.0 + z]),
        np.stack([-R * s, R * c, z]),
        np.stack([pj.app + Rpp * c, pj.bpp + Rpp * s, z]),
        np.stack([-Rp * s, Rp * c, z]),
        np.stack([-R * c, -R * s, z]),
    )


REVOLUTION = "Revolution"
LINEAR_CENTERS = "LinearCenters"
MINIMAL = "Minimal"


@dataclass
class ParallelAnalysis:
    lhs: TrigPoly
    rhs: TrigPoly
    residual: TrigPoly
    verdict: str
    witness: dict = field(default_factory=dict)


def parallel_circle_analysis(pj: ParallelCircleJet, lam: float, tol: float = 1e-9) -> ParallelAnalysis:
    """Expand both sides for horizontal circles and follow the case chain.

    ``lhs`` is ebar G + gbar E - 2 fbar F (order 1), ``rhs`` is
    (EG - F^2) det(X, X_s, X_t) (order 3) and ``residual`` = lhs + 2 lambda rhs.

    Verdicts: ``Revolution`` when the centres do not move (a' = b' = 0);
    ``Minimal`` when the centres move linearly (a = a' s, b = b' s) and
    R' s = R, so det vanishes; ``LinearCenters`` when the centres move
    linearly but R' s != R, in which case ``witness["order2_obstructed"]``
    records whether the cos 2t / sin 2t coefficients of rhs survive;
    ``NotSelfSimilar`` otherwise (the cos 3t / sin 3t coefficients of rhs
    cannot be balanced).
    """
    def lhs_f(t):
        fd = fundamental_data(parallel_circle_jet(pj, t), check=False)
        return fd.ebar * fd.G + fd.gbar * fd.E - 2.0 * fd.fbar * fd.F

    def rhs_f(t):
        fd = fundamental_data(parallel_circle_jet(pj, t), check=False)
        return fd.W * fd.detX

    def res_f(t):
        return residual_from_forms(fundamental_data(parallel_circle_jet(pj, t), check=False), lam)

    lhs = fourier_extract(lhs_f, 3)
    rhs = fourier_extract(rhs_f, 3)
    residual = fourier_extract(res_f, 3)
    scale = max(1.0, *(abs(getattr(pj, f.name)) for f in fields(pj)))
    drift = np.hypot(pj.ap, pj.bp)
    offset = np.hypot(pj.ap * pj.s - pj.a, pj.bp * pj.s - pj.b)
    w = {
        "cos3t": coeff(rhs, 3, "cos"),
        "sin3t": coeff(rhs, 3, "sin"),
        "cos2t": coeff(rhs, 2, "cos"),
        "sin2t": coeff(rhs, 2, "sin"),
        "center_drift": float(drift),
        "center_offset": float(offset),
    }
    if drift <= tol * scale:
        verdict = REVOLUTION
    elif offset <= tol * scale:
        w["Rp_s_minus_R"] = pj.Rp * pj.s - pj.R
        order2 = TrigPoly([0.0, 0.0, w["cos2t"]], [0.0, w["sin2t"]], scale=rhs.scale)
        w["order2_obstructed"] = not is_zero(order2, tol)
        verdict = MINIMAL if abs(w["Rp_s_minus_R"]) <= tol * scale else LINEAR_CENTERS
    else:
        verdict = NOT_SELF_SIMILAR
    return ParallelAnalysis(lhs, rhs, residual, verdict, w)
