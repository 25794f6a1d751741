"""Curve-shortening flow of closed planar curves and the homothety check."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import _kernels
from .curves import PLANAR, SampledCurve, hausdorff

REMESH_EVERY = 20
CFL = 0.25


@dataclass(eq=False)
class FlowResult:
    curve: SampledCurve
    time: float
    completed: bool
    steps: int
    status: int = 0

    def to_dict(self) -> dict:
        return {"time": self.time, "completed": self.completed, "steps": self.steps,
                "status": self.status, "n_points": len(self.curve)}


def stable_dt(curve: SampledCurve) -> float:
    """Largest explicit step allowed: 0.25 times the squared minimum spacing."""
    return CFL * float(np.min(curve.gaps())) ** 2


def csf_evolve(curve: SampledCurve, T: float, dt: float | None = None, remesh_every: int = REMESH_EVERY,
               kmax: float = 1e6) -> FlowResult:
    """Move every vertex by its curvature vector until time ``T``.

    Explicit steps of at most ``dt`` (default and upper bound: 0.25 times the
    squared minimum spacing, re-evaluated after each remesh). Every
    ``remesh_every`` steps the curve is resampled to uniform spacing by a
    periodic cubic spline. If the curvature exceeds ``kmax`` the run stops
    and the result carries the time reached with ``completed=False``.
    """
    if not curve.closed or curve.kind != PLANAR:
        raise ValueError("csf_evolve needs a closed planar curve")
    if T < 0:
        raise ValueError("T must be non-negative")
    n = len(curve)
    cur = curve.resample(n) if T > 0 else curve
    t, steps = 0.0, 0
    while T - t > 1e-15 * max(1.0, T):
        bound = stable_dt(cur)
        if dt is not None and dt > bound * (1 + 1e-12):
            raise ValueError(f"dt={dt} exceeds the stability bound {bound}")
        h = bound if dt is None else dt
        k = remesh_every
        if k * h >= T - t:
            k = max(1, math.ceil((T - t) / h))
            h = (T - t) / k
        pts, done, status = _kernels.csf_steps(cur.points, h, k, kmax)
        steps += done
        t += done * h
        if status != _kernels.OK:
            last = SampledCurve(pts, closed=True, kind=PLANAR, check=False)
            return FlowResult(last, t, False, steps, int(status))
        cur = SampledCurve(pts, closed=True, kind=PLANAR, check=False).resample(n)
    return FlowResult(cur, t, True, steps)


def self_similarity_check(initial: SampledCurve, evolved: SampledCurve, lam: float, T: float,
                          samples: int = 4096) -> float:
    """Hausdorff distance between ``evolved`` and sqrt(1 - 2 lam T) * ``initial``."""
    if not (T >= 0 and 2.0 * lam * T < 1.0):
        raise ValueError("need 0 <= T < 1 / (2 lambda)")
    return hausdorff(evolved, initial.scaled(math.sqrt(1.0 - 2.0 * lam * T)), samples)


def circle(radius: float = 1.0, n: int = 256, center=(0.0, 0.0)) -> SampledCurve:
    th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    pts = np.column_stack([center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)])
    return SampledCurve(pts, closed=True, kind=PLANAR, arclength=True)


def square(side: float = 1.0, n: int = 256) -> SampledCurve:
    """Axis-aligned square centred at the origin, ``n`` points equally spaced along the boundary."""
    u = np.linspace(0.0, 4.0, n, endpoint=False)
    edge = np.floor(u).astype(int)
    f = u - edge
    h = 0.5 * side
    corners = np.array([[-h, -h], [h, -h], [h, h], [-h, h], [-h, -h]])
    pts = corners[edge] + f[:, None] * (corners[edge + 1] - corners[edge])
    return SampledCurve(pts, closed=True, kind=PLANAR, arclength=True)
