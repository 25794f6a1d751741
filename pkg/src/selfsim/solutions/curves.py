"""Sampled planar and profile curves, spline resampling and Hausdorff distance."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.spatial import cKDTree

PLANAR = "planar"
PROFILE = "profile"
_HEADERS = {PLANAR: ("s", "x", "y"), PROFILE: ("s", "r", "z")}


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """Ordered samples of a planar curve (x, y) or a meridian profile (r, z).

    Closed curves do not repeat their first point. Construction checks
    that consecutive gaps (including the closing gap) are within a factor
    2 of the median gap and that profiles stay off the axis.
    """

    points: np.ndarray
    closed: bool = True
    kind: str = PLANAR
    arclength: bool = False
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise ValueError("points must be an (n, 2) array with n >= 3")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if self.kind not in _HEADERS:
            raise ValueError(f"kind must be {PLANAR!r} or {PROFILE!r}")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        if self.check:
            if self.kind == PROFILE and np.any(pts[:, 0] <= 0):
                raise ValueError("profile curve must have r > 0")
            gaps = self.gaps()
            med = np.median(gaps)
            if med <= 0 or np.any(gaps > 2.0 * med) or np.any(gaps < 0.5 * med):
                raise ValueError("sample spacing must stay within a factor 2 of the median")

    def __len__(self):
        return self.points.shape[0]

    def gaps(self) -> np.ndarray:
        p = self.points
        q = np.vstack([p, p[:1]]) if self.closed else p
        return np.hypot(*np.diff(q, axis=0).T)

    @property
    def s(self) -> np.ndarray:
        """Cumulative chord length at each sample, starting at 0."""
        return np.concatenate([[0.0], np.cumsum(self.gaps())[: len(self) - 1]])

    @property
    def length(self) -> float:
        return float(np.sum(self.gaps()))

    def scaled(self, c: float) -> "SampledCurve":
        return SampledCurve(c * self.points, self.closed, self.kind, self.arclength)

    def knots(self) -> np.ndarray:
        """Spline parameter: chord length, or equal steps of the same total for arclength samples."""
        m = len(self) + (1 if self.closed else 0)
        if self.arclength:
            return np.linspace(0.0, self.length if self.closed else float(self.s[-1]), m)
        return np.concatenate([self.s, [self.length]]) if self.closed else self.s

    def spline(self) -> CubicSpline:
        """Cubic spline in :meth:`knots`: periodic when closed, natural otherwise."""
        if self.closed:
            knots = self.knots()
            vals = np.vstack([self.points, self.points[:1]])
            return CubicSpline(knots, vals, bc_type="periodic")
        return CubicSpline(self.knots(), self.points, bc_type="natural")

    def resample(self, n: int) -> "SampledCurve":
        """``n`` points equally spaced in arclength of the interpolating spline."""
        sp = self.spline()
        span = self.length if self.closed else self.s[-1]
        fine = np.linspace(0.0, span, 16 * max(n, len(self)) + 1)
        xy = sp(fine)
        arc = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(xy, axis=0).T))])
        targets = np.linspace(0.0, arc[-1], n, endpoint=not self.closed)
        param = np.interp(targets, arc, fine)
        return SampledCurve(sp(param), self.closed, self.kind, arclength=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_HEADERS[self.kind])
        for si, (u, v) in zip(self.s, self.points):
            w.writerow([repr(float(si)), repr(float(u)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, closed: bool = True) -> "SampledCurve":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty curve file")
        head = tuple(c.strip() for c in rows[0])
        kinds = {v: k for k, v in _HEADERS.items()}
        if head not in kinds:
            raise ValueError(f"curve header must be 's,x,y' or 's,r,z', got {','.join(head)}")
        pts = np.array([[float(r[1]), float(r[2])] for r in rows[1:] if r], dtype=float)
        return cls(pts, closed=closed, kind=kinds[head])


@dataclass(eq=False)
class ShootResult:
    curve: SampledCurve | None
    parameter: float
    closure_defect: float
    rotation_index: int
    success: bool
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "parameter": float(self.parameter),
            "closure_defect": float(self.closure_defect),
            "rotation_index": int(self.rotation_index),
            "success": bool(self.success),
            "n_points": 0 if self.curve is None else len(self.curve),
        }
        out.update(self.info)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _polyline_distance(query: np.ndarray, pts: np.ndarray, closed: bool) -> np.ndarray:
    """Distance from each query point to the polyline through ``pts``.

    The nearest vertex is found with a k-d tree; the two segments meeting
    there are then checked exactly.
    """
    n = pts.shape[0]
    _, j = cKDTree(pts).query(query)
    best = np.full(query.shape[0], np.inf)
    for step in (-1, 1):
        k = j + step
        if closed:
            k %= n
        else:
            k = np.clip(k, 0, n - 1)
        a, b = pts[j], pts[k]
        ab = b - a
        denom = np.einsum("ij,ij->i", ab, ab)
        with np.errstate(invalid="ignore", divide="ignore"):
            u = np.where(denom > 0, np.einsum("ij,ij->i", query - a, ab) / denom, 0.0)
        u = np.clip(u, 0.0, 1.0)
        d = np.hypot(*(a + u[:, None] * ab - query).T)
        best = np.minimum(best, d)
    return best


def hausdorff(c1: SampledCurve, c2: SampledCurve, samples: int = 4096) -> float:
    """Symmetric Hausdorff distance between two curves resampled to ``samples`` (>= 512) points."""
    m = max(512, int(samples))
    p = c1.resample(m).points
    q = c2.resample(m).points
    return float(max(_polyline_distance(p, q, c2.closed).max(), _polyline_distance(q, p, c1.closed).max()))


def spectral_derivatives(values: np.ndarray, period: float, order: int = 2):
    """First ``order`` derivatives of uniformly sampled periodic data via the FFT.

    Modes below 1e-14 of the largest are dropped before differentiating
    to keep roundoff from being amplified.
    """
    n = values.shape[0]
    c = np.fft.rfft(values, axis=0)
    c[np.abs(c) < 1e-14 * np.max(np.abs(c))] = 0.0
    if n % 2 == 0:
        c[-1] = 0.0
    w = 2j * np.pi * np.fft.rfftfreq(n, d=period / n)
    shape = (-1,) + (1,) * (values.ndim - 1)
    return [np.fft.irfft(c * w.reshape(shape) ** k, n=n, axis=0) for k in range(1, order + 1)]
