"""Outward-rounded interval arithmetic over mpmath's directed-rounding kernels.

An Enclosure is a pair of binary floats [lo, hi] at an explicit precision P
(bits of significand) with the contract that the represented real quantity
lies inside the interval.  Every operation rounds the lower endpoint toward
-inf and the upper endpoint toward +inf, so the contract survives arbitrary
compositions of +, -, *, /, sqrt and exp.

Exact integers and fractions enter through directed conversion, never through
a float, so enclosures built from exact data are correct by construction.
Precision is always an argument; no global mpmath state is touched.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import libmp

DEFAULT_PRECISION = 128

_DOWN = "f"  # toward -inf
_UP = "c"    # toward +inf

# Extra outward ulps applied after transcendental endpoint evaluations.
# libmp computes exp/pi with guard bits and then rounds directionally; the
# guard-bit argument is empirical rather than proven, so we pad the result.
_TRANSCENDENTAL_SLACK = 8

ExactScalar = (int, Fraction)


def raw_from_exact(value, prec, rnd):
    """Directed conversion of an int or Fraction to a raw libmp float."""
    if isinstance(value, int):
        return libmp.from_int(value, prec, rnd)
    if isinstance(value, Fraction):
        return libmp.from_rational(value.numerator, value.denominator, prec, rnd)
    raise TypeError(f"expected int or Fraction, got {type(value).__name__}")


def fraction_from_raw(raw):
    """Exact rational value of a finite raw libmp float."""
    sign, man, exp, bc = raw
    if man == 0:
        if exp != 0:
            raise ValueError("non-finite float has no rational value")
        return Fraction(0)
    man = int(man)
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man * (1 << exp))
    return Fraction(man, 1 << (-exp))


def mpf_from_raw(raw):
    """Wrap a raw libmp float as an mpmath.mpf without re-rounding."""
    return mpmath.mp.make_mpf(raw)


def exact_decimal(value: Fraction) -> str:
    """Exact decimal string of a rational whose denominator is a power of two.

    Such numbers always have a terminating decimal expansion, so the string is
    lossless.  Used to serialize interval endpoints.
    """
    num = value.numerator
    den = value.denominator
    if den == 1:
        return str(num)
    k = den.bit_length() - 1
    if (1 << k) != den:
        raise ValueError("denominator is not a power of two")
    digits = num * 5**k  # num/2^k == num*5^k / 10^k
    sign = "-" if digits < 0 else ""
    digits = abs(digits)
    s = str(digits).rjust(k + 1, "0")
    whole, frac = s[:-k], s[-k:]
    frac = frac.rstrip("0")
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def _widen_raw(raw, prec, rnd):
    # Pad a transcendental result outward by _TRANSCENDENTAL_SLACK ulps.
    pad = libmp.mpf_mul(
        libmp.mpf_abs(raw),
        libmp.from_man_exp(_TRANSCENDENTAL_SLACK, -prec),
        prec,
        _UP,
    )
    if rnd == _DOWN:
        return libmp.mpf_sub(raw, pad, prec, _DOWN)
    return libmp.mpf_add(raw, pad, prec, _UP)


class Enclosure:
    """Closed interval [lo, hi] of binary floats with outward rounding."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec=DEFAULT_PRECISION):
        # lo/hi are raw libmp tuples; use the class methods for exact input.
        if libmp.mpf_gt(lo, hi):
            raise ValueError("interval endpoints out of order")
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # -- construction -------------------------------------------------

    @classmethod
    def from_exact(cls, value, prec=DEFAULT_PRECISION):
        """Tightest enclosure of an exact int or Fraction."""
        return cls(
            raw_from_exact(value, prec, _DOWN),
            raw_from_exact(value, prec, _UP),
            prec,
        )

    @classmethod
    def from_bounds(cls, lo, hi, prec=DEFAULT_PRECISION):
        """Enclosure from exact rational bounds (lo may equal hi)."""
        return cls(
            raw_from_exact(lo, prec, _DOWN),
            raw_from_exact(hi, prec, _UP),
            prec,
        )

    @classmethod
    def pi(cls, prec=DEFAULT_PRECISION):
        lo = _widen_raw(libmp.mpf_pi(prec, _DOWN), prec, _DOWN)
        hi = _widen_raw(libmp.mpf_pi(prec, _UP), prec, _UP)
        return cls(lo, hi, prec)

    # -- exact views ---------------------------------------------------

    @property
    def lo_fraction(self) -> Fraction:
        return fraction_from_raw(self.lo)

    @property
    def hi_fraction(self) -> Fraction:
        return fraction_from_raw(self.hi)

    @property
    def lo_mpf(self):
        return mpf_from_raw(self.lo)

    @property
    def hi_mpf(self):
        return mpf_from_raw(self.hi)

    def width(self) -> Fraction:
        return self.hi_fraction - self.lo_fraction

    def midpoint(self) -> Fraction:
        return (self.lo_fraction + self.hi_fraction) / 2

    # -- predicates ----------------------------------------------------

    def contains(self, value) -> bool:
        """Exact containment test for an int, Fraction or Enclosure."""
        if isinstance(value, Enclosure):
            return (self.lo_fraction <= value.lo_fraction
                    and value.hi_fraction <= self.hi_fraction)
        if not isinstance(value, ExactScalar):
            raise TypeError("containment is only decided against exact values")
        v = Fraction(value)
        return self.lo_fraction <= v <= self.hi_fraction

    def containment_margin(self, value) -> float:
        """Distance from value to the nearer endpoint, as a fraction of width.

        Positive inside (max 0.5 at the midpoint), negative outside.  Exact
        rational arithmetic; only the final report number is a float.
        """
        v = Fraction(value)
        lo = self.lo_fraction
        hi = self.hi_fraction
        if hi == lo:
            return 0.0 if v == lo else float("-inf")
        m = min(v - lo, hi - v) / (hi - lo)
        return float(m)

    def strictly_positive(self) -> bool:
        return libmp.mpf_gt(self.lo, libmp.fzero)

    def strictly_negative(self) -> bool:
        return libmp.mpf_lt(self.hi, libmp.fzero)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Enclosure):
            if other.prec != self.prec:
                raise ValueError("mixed-precision interval arithmetic")
            return other
        if isinstance(other, ExactScalar):
            return Enclosure.from_exact(other, self.prec)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.prec
        return Enclosure(
            libmp.mpf_add(self.lo, o.lo, p, _DOWN),
            libmp.mpf_add(self.hi, o.hi, p, _UP),
            p,
        )

    __radd__ = __add__

    def __neg__(self):
        return Enclosure(libmp.mpf_neg(self.hi), libmp.mpf_neg(self.lo), self.prec)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.prec
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        lo = None
        hi = None
        for a, b in pairs:
            d = libmp.mpf_mul(a, b, p, _DOWN)
            u = libmp.mpf_mul(a, b, p, _UP)
            if lo is None or libmp.mpf_lt(d, lo):
                lo = d
            if hi is None or libmp.mpf_gt(u, hi):
                hi = u
        return Enclosure(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not (o.strictly_positive() or o.strictly_negative()):
            raise ZeroDivisionError("interval divisor straddles zero")
        p = self.prec
        pairs = ((self.lo, o.lo), (self.lo, o.hi), (self.hi, o.lo), (self.hi, o.hi))
        lo = None
        hi = None
        for a, b in pairs:
            d = libmp.mpf_div(a, b, p, _DOWN)
            u = libmp.mpf_div(a, b, p, _UP)
            if lo is None or libmp.mpf_lt(d, lo):
                lo = d
            if hi is None or libmp.mpf_gt(u, hi):
                hi = u
        return Enclosure(lo, hi, p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def sqrt(self):
        """Square root; requires a nonnegative interval."""
        if libmp.mpf_lt(self.lo, libmp.fzero):
            raise ValueError("sqrt of an interval reaching below zero")
        p = self.prec
        # libmp square root is integer-based and honors directed rounding.
        return Enclosure(
            libmp.mpf_sqrt(self.lo, p, _DOWN),
            libmp.mpf_sqrt(self.hi, p, _UP),
            p,
        )

    def exp(self):
        p = self.prec
        lo = _widen_raw(libmp.mpf_exp(self.lo, p, _DOWN), p, _DOWN)
        hi = _widen_raw(libmp.mpf_exp(self.hi, p, _UP), p, _UP)
        return Enclosure(lo, hi, p)

    def plus_minus(self, radius):
        """Widen symmetrically by an upper bound on the given radius."""
        if isinstance(radius, Enclosure):
            r = radius.hi
        elif isinstance(radius, ExactScalar):
            r = raw_from_exact(radius, self.prec, _UP)
        else:
            raise TypeError("radius must be exact or an Enclosure")
        if libmp.mpf_lt(r, libmp.fzero):
            raise ValueError("negative radius")
        p = self.prec
        return Enclosure(
            libmp.mpf_sub(self.lo, r, p, _DOWN),
            libmp.mpf_add(self.hi, r, p, _UP),
            p,
        )

    # -- display -----------------------------------------------------------

    def __repr__(self):
        return "Enclosure[{}, {}] @{}".format(
            libmp.to_str(self.lo, 12), libmp.to_str(self.hi, 12), self.prec
        )


def sqrt_enclosure(value, prec=DEFAULT_PRECISION):
    """Enclosure of sqrt(value) for an exact nonnegative int or Fraction."""
    return Enclosure.from_exact(value, prec).sqrt()


def exp_enclosure(value, prec=DEFAULT_PRECISION):
    """Enclosure of exp(value) for an exact int or Fraction."""
    return Enclosure.from_exact(value, prec).exp()
