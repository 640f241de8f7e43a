"""Exact rational scalars.

All lattice variables and polynomial coefficients are arbitrary-precision
rationals, kept reduced with positive denominator at all times.  gmpy2's
``mpq`` provides exactly that representation and is much faster than
``fractions.Fraction``; the latter is kept as a fallback so the package
still works on interpreters without gmpy2.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

#: canonical constants
ZERO = Q(0)
ONE = Q(1)


def as_q(value) -> Q:
    """Coerce ints, strings like ``"p/q"``, and rational types to Q."""
    if isinstance(value, Q):
        return value
    if isinstance(value, str):
        return Q(value)
    if isinstance(value, float):
        raise TypeError("refusing to coerce float to exact rational: %r" % value)
    return Q(value.numerator, value.denominator) if hasattr(value, "numerator") else Q(value)


def q_str(value) -> str:
    """Serialize a rational as ``"p/q"`` (``"p"`` when the denominator is 1)."""
    q = as_q(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def q_from_str(text: str) -> Q:
    """Parse ``"p"`` or ``"p/q"`` back into a rational."""
    return Q(text)
