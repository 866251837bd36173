"""Minimal exact scalar arithmetic for residue and quantization algebra.

Residue branches and level indices obey exact algebraic identities (root sums,
sum rules).  Where the inputs are rational these identities are checked and
propagated in exact arithmetic: real rationals as fractions.Fraction, complex
rationals as ExactComplex (a pair of Fractions).  Anything inexact falls back
to ordinary floats/complex; helpers here normalize between the two worlds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational


def sqrt_fraction(q):
    """Exact square root of a nonnegative Fraction, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("sqrt_fraction needs a nonnegative argument")
    rn = math.isqrt(q.numerator)
    rd = math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ExactComplex):
            return other
        if isinstance(other, Rational):
            return ExactComplex(Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.as_complex() + other
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other if isinstance(other, ExactComplex) else -Fraction(other)
                       if isinstance(other, Rational) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.as_complex() * other
        return ExactComplex(self.re * o.re - self.im * o.im,
                            self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.as_complex() / other
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("ExactComplex division by zero")
        return ExactComplex((self.re * o.re + self.im * o.im) / d,
                            (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return other / self.as_complex()
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return self.as_complex() == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- conversions ------------------------------------------------------
    @property
    def is_real(self):
        return self.im == 0

    def as_fraction(self):
        if not self.is_real:
            raise ValueError("not a real value: %r" % (self,))
        return self.re

    def as_complex(self):
        return complex(float(self.re), float(self.im))

    def sqrt(self):
        """Exact principal square root, or None when irrational."""
        if self.im == 0:
            if self.re >= 0:
                r = sqrt_fraction(self.re)
                return None if r is None else ExactComplex(r, Fraction(0))
            r = sqrt_fraction(-self.re)
            return None if r is None else ExactComplex(Fraction(0), r)
        # general case: need |z| to be rational, then half-angle algebra
        mod2 = self.re * self.re + self.im * self.im
        mod = sqrt_fraction(mod2)
        if mod is None:
            return None
        u2 = (mod + self.re) / 2
        v2 = (mod - self.re) / 2
        u = sqrt_fraction(u2)
        v = sqrt_fraction(v2)
        if u is None or v is None:
            return None
        if self.im < 0:
            v = -v
        return ExactComplex(u, v)

    def __repr__(self):
        return "ExactComplex(%s, %s)" % (self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return "%s %s %s*i" % (self.re, sign, abs(self.im))


def as_exact(value):
    """Return a Fraction/ExactComplex view of value, or None if inexact.

    Integers and Fractions map to Fraction; ExactComplex passes through
    (collapsing to Fraction when purely real).  Floats/complex return None —
    they carry no exactness claim.
    """
    if isinstance(value, bool):
        return None
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, ExactComplex):
        return value.as_fraction() if value.is_real else value
    return None


def to_complex(value):
    """Coerce any scalar used by the package to a Python complex."""
    if isinstance(value, ExactComplex):
        return value.as_complex()
    if isinstance(value, Rational):
        return complex(float(Fraction(value)), 0.0)
    return complex(value)


def to_float(value):
    """Coerce a real-valued scalar to float (raises if meaningfully complex)."""
    z = to_complex(value)
    if abs(z.imag) > 1e-12 * max(1.0, abs(z.real)):
        raise ValueError("value has a nonnegligible imaginary part: %r" % (value,))
    return z.real


def exact_sqrt(value):
    """Exact sqrt of a Fraction/ExactComplex if representable, else None."""
    e = as_exact(value)
    if e is None:
        return None
    if isinstance(e, Fraction):
        if e >= 0:
            return sqrt_fraction(e)
        r = sqrt_fraction(-e)
        return None if r is None else ExactComplex(Fraction(0), r)
    return e.sqrt()


def sort_key(value):
    """Deterministic ordering key: larger real part first, then larger imag."""
    z = to_complex(value)
    return (-z.real, -z.imag)
