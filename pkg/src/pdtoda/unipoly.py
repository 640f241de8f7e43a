"""Dense univariate polynomials over the exact rationals.

Coefficients are stored lowest degree first; the invariant is that the
highest stored coefficient is nonzero, with the empty tuple representing
the zero polynomial.  Everything here is exact except :func:`roots_numeric`,
which is the single deliberately floating-point routine (reporting only).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import NumericFailureError, PdTodaError
from .rationals import ONE, ZERO, Q, as_q, q_str


class UniPoly:
    """Polynomial in one variable with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "UniPoly":
        return cls(())

    @classmethod
    def one(cls) -> "UniPoly":
        return cls((ONE,))

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls((as_q(c),))

    @classmethod
    def x(cls, power: int = 1) -> "UniPoly":
        if power < 0:
            raise ValueError("negative power")
        return cls((ZERO,) * power + (ONE,))

    @classmethod
    def from_roots(cls, roots: Sequence) -> "UniPoly":
        p = cls.one()
        for r in roots:
            p = p * cls((-as_q(r), ONE))
        return p

    # -- basic queries -------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with the convention deg 0 = -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        if not self.coeffs:
            raise PdTodaError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    # -- arithmetic ----------------------------------------------------

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-c for c in self.coeffs))

    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(tuple(self.coeff(k) + other.coeff(k) for k in range(n)))

    __radd__ = __add__

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(tuple(self.coeff(k) - other.coeff(k) for k in range(n)))

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            c = as_q(other)
            return UniPoly(tuple(a * c for a in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative exponent")
        out, base = UniPoly.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "UniPoly":
        """Multiply by x**k."""
        if not self.coeffs:
            return self
        return UniPoly((ZERO,) * k + self.coeffs)

    def divmod(self, other: "UniPoly"):
        """Field division: self = q*other + r with deg r < deg other."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly(), self
        quot = [ZERO] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quot), UniPoly(rem[: other.degree if other.degree > 0 else 0])

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise PdTodaError("inexact polynomial division")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        inv = 1 / self.lead
        return UniPoly(tuple(c * inv for c in self.coeffs))

    def strip_x_power(self):
        """Factor out the largest x**k: return (k, self / x**k)."""
        if self.is_zero():
            return 0, self
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k, UniPoly(self.coeffs[k:])

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, value):
        """Horner evaluation; exact for rationals, float/complex otherwise."""
        acc = value * 0
        for c in reversed(self.coeffs):
            acc = acc * value + (c if isinstance(value, (Q, int)) else complex(c))
        return acc

    def __repr__(self) -> str:
        if self.is_zero():
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(f"({q_str(c)})*x^{i}" if i else f"({q_str(c)})")
        return "UniPoly(" + " + ".join(terms) + ")"


def gcd_monic(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic exact gcd by the Euclidean algorithm over the rationals."""
    if p.is_zero() and q.is_zero():
        raise PdTodaError("gcd(0, 0) is undefined")
    a, b = p, q
    while not b.is_zero():
        _, r = a.divmod(b)
        a, b = b, r
    return a.monic()


def lagrange_interpolate(points) -> UniPoly:
    """Exact polynomial through ``points = [(x_i, y_i)]`` with distinct x_i.

    Newton's divided differences; cost O(n^2) rational operations.
    """
    xs = [as_q(x) for x, _ in points]
    table = [as_q(y) for _, y in points]
    n = len(xs)
    # divided differences in place
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    poly = UniPoly()
    basis = UniPoly.one()
    for i in range(n):
        poly = poly + basis * table[i]
        basis = basis * UniPoly((-xs[i], ONE))
    return poly


def roots_numeric(p: UniPoly, residual_bound: float = 1e-8):
    """All complex roots in double precision, via companion-matrix
    eigenvalues plus a few Newton polishing steps.

    Returns roots sorted lexicographically by (real, imag).  Raises
    :class:`NumericFailureError` when some root's relative residual
    |p(root)| / max|coeff| exceeds ``residual_bound`` after polishing.
    """
    if p.degree < 1:
        raise PdTodaError("roots_numeric requires degree >= 1")
    cs = np.array([float(c) for c in p.coeffs], dtype=float)
    scale = np.max(np.abs(cs))
    monic = cs / cs[-1]
    n = p.degree
    comp = np.zeros((n, n))
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -monic[:-1]
    roots = np.linalg.eigvals(comp)

    dp = p.derivative()

    def val(z, poly):
        acc = 0j
        for c in reversed(poly.coeffs):
            acc = acc * z + complex(c)
        return acc

    polished = []
    for z in roots:
        for _ in range(3):
            fz = val(z, p)
            dz = val(z, dp)
            if dz == 0:
                break
            step = fz / dz
            if not np.isfinite(step.real) or not np.isfinite(step.imag):
                break
            z2 = z - step
            if abs(val(z2, p)) < abs(fz):
                z = z2
            else:
                break
        polished.append(z)

    for z in polished:
        if abs(val(z, p)) / scale > residual_bound:
            raise NumericFailureError(
                f"root residual {abs(val(z, p)) / scale:.3e} exceeds {residual_bound:.1e}"
            )
    polished.sort(key=lambda z: (z.real, z.imag))
    return polished
