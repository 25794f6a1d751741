"""Finite Fourier series in the circle variable t.

A :class:`TrigPoly` of order n stores ``a_0..a_n`` and ``b_1..b_n`` and
evaluates to ``a_0 + sum_j a_j cos(jt) + b_j sin(jt)``. Products are formed
exactly by the product-to-sum rules (a convolution of the two-sided
exponential coefficients).
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class TrigPoly:
    a: np.ndarray
    b: np.ndarray
    # magnitude of the largest term that went into this polynomial; see is_zero
    scale: float = field(default=0.0, compare=False)

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.a, dtype=float)).copy()
        b = np.atleast_1d(np.asarray(self.b, dtype=float)).copy()
        if a.size == 0:
            a = np.zeros(1)
        if b.size != a.size - 1:
            raise ValueError(f"need len(b) == len(a) - 1, got {b.size} and {a.size}")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        natural = float(max(np.max(np.abs(a)), np.max(np.abs(b), initial=0.0)))
        object.__setattr__(self, "scale", max(float(self.scale), natural))

    @property
    def order(self) -> int:
        return self.a.size - 1

    @classmethod
    def zero(cls, order: int = 0) -> "TrigPoly":
        return cls(np.zeros(order + 1), np.zeros(order))

    @classmethod
    def constant(cls, c: float) -> "TrigPoly":
        return cls([c], [])

    @classmethod
    def cos(cls, j: int, amp: float = 1.0) -> "TrigPoly":
        a = np.zeros(j + 1)
        a[j] = amp
        return cls(a, np.zeros(j))

    @classmethod
    def sin(cls, j: int, amp: float = 1.0) -> "TrigPoly":
        if j < 1:
            raise ValueError("sin term needs j >= 1")
        b = np.zeros(j)
        b[j - 1] = amp
        return cls(np.zeros(j + 1), b)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        j = np.arange(1, self.order + 1)
        jt = np.multiply.outer(t, j)
        return self.a[0] + np.cos(jt) @ self.a[1:] + np.sin(jt) @ self.b

    def padded(self, order: int) -> "TrigPoly":
        if order < self.order:
            raise ValueError("cannot pad to a lower order")
        a = np.zeros(order + 1)
        b = np.zeros(order)
        a[: self.a.size] = self.a
        b[: self.b.size] = self.b
        return TrigPoly(a, b, scale=self.scale)

    def truncated(self, order: int) -> "TrigPoly":
        return TrigPoly(self.a[: order + 1], self.b[:order], scale=self.scale)

    def __add__(self, other):
        if not isinstance(other, TrigPoly):
            other = TrigPoly.constant(float(other))
        n = max(self.order, other.order)
        p, q = self.padded(n), other.padded(n)
        return TrigPoly(p.a + q.a, p.b + q.b, scale=max(self.scale, other.scale))

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self.a, -self.b, scale=self.scale)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return trig_mul(self, other)
        c = float(other)
        return TrigPoly(c * self.a, c * self.b, scale=abs(c) * self.scale)

    __rmul__ = __mul__

    def to_exponential(self) -> np.ndarray:
        """Two-sided coefficients c_{-n..n} with f = sum c_j e^{ijt}."""
        n = self.order
        c = np.zeros(2 * n + 1, dtype=complex)
        c[n] = self.a[0]
        half = 0.5 * (self.a[1:] - 1j * self.b)
        c[n + 1:] = half
        c[:n] = np.conj(half)[::-1]
        return c

    @classmethod
    def from_exponential(cls, c: np.ndarray, scale: float = 0.0) -> "TrigPoly":
        n = (c.size - 1) // 2
        pos = c[n + 1:]
        return cls(np.concatenate([[c[n].real], 2.0 * pos.real]), -2.0 * pos.imag, scale=scale)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["j", "a_j", "b_j"])
        for j in range(self.order + 1):
            w.writerow([j, repr(float(self.a[j])), repr(float(self.b[j - 1])) if j else "0.0"])
        return buf.getvalue()


def trig_mul(p: TrigPoly, q: TrigPoly) -> TrigPoly:
    """Exact product, of order ``p.order + q.order``."""
    c = np.convolve(p.to_exponential(), q.to_exponential())
    return TrigPoly.from_exponential(c, scale=p.scale * q.scale)


def coeff(p: TrigPoly, j: int, kind: str = "cos") -> float:
    """The ``cos`` (a_j) or ``sin`` (b_j) coefficient of ``p``."""
    if kind == "cos":
        if not 0 <= j <= p.order:
            raise IndexError(f"cos index {j} outside 0..{p.order}")
        return float(p.a[j])
    if kind == "sin":
        if not 1 <= j <= p.order:
            raise IndexError(f"sin index {j} outside 1..{p.order}")
        return float(p.b[j - 1])
    raise ValueError(f"kind must be 'cos' or 'sin', got {kind!r}")


def is_zero(p: TrigPoly, tol: float = 1e-9) -> bool:
    """True when every coefficient is within ``tol * max(1, p.scale)``.

    ``p.scale`` remembers the largest term combined into ``p``, so a
    residual built from large cancelling pieces is judged relative to them.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    bound = tol * max(1.0, p.scale)
    return bool(np.all(np.abs(p.a) <= bound) and np.all(np.abs(p.b) <= bound))
