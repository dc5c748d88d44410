"""Exact rational parsing plus arithmetic in Q extended by square roots.

Every inequality the package certifies is decided exactly.  Purely rational
comparisons use Fraction.  Bounds involving p-th roots with p of denominator
at most 2 reduce, after cross-raising to integer powers, to sign tests of
sums c_1*sqrt(m_1) + ... + c_k*sqrt(m_k) with rational c_i and squarefree
m_i.  SqrtSum represents such numbers closed under +, -, * and decides their
sign exactly: the sum is zero iff all grouped coefficients vanish (square
roots of distinct squarefree integers are linearly independent over Q), and
a nonzero sum is separated from zero by certified isqrt interval refinement.
"""

from fractions import Fraction
from math import isqrt

import sympy

from .errors import ConfigError, ParameterError


def parse_fraction(text):
    """Parse 'p/q' or 'p' into a Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def format_fraction(value):
    """Render a rational as 'p/q', or just 'p' for integers."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _squarefree_split(m):
    """Write m = k*k * m0 with m0 squarefree; returns (k, m0)."""
    if m <= 0:
        raise ParameterError(f"positive integer required, got {m}")
    k = 1
    m0 = 1
    for p, e in sympy.factorint(m).items():
        k *= p ** (e // 2)
        if e % 2:
            m0 *= p
    return k, m0


class SqrtSum:
    """An exact number of the form sum(c_i * sqrt(m_i)), m_i squarefree."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        # radicand (squarefree positive int) -> nonzero Fraction coefficient
        self._terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def from_rational(cls, q):
        q = Fraction(q)
        return cls({1: q}) if q else cls()

    @classmethod
    def sqrt(cls, q):
        """Exact square root of a nonnegative rational."""
        q = Fraction(q)
        if q < 0:
            raise ParameterError(f"square root of negative rational {q}")
        if q == 0:
            return cls()
        k, m0 = _squarefree_split(q.numerator * q.denominator)
        return cls({m0: Fraction(k, q.denominator)})

    @staticmethod
    def _coerce(value):
        if isinstance(value, SqrtSum):
            return value
        if isinstance(value, (int, Fraction)):
            return SqrtSum.from_rational(value)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return SqrtSum(terms)

    __radd__ = __add__

    def __neg__(self):
        return SqrtSum({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                # sqrt(m1)*sqrt(m2) = g*sqrt((m1/g)*(m2/g)) with g = gcd
                g = sympy.igcd(m1, m2)
                m = (m1 // g) * (m2 // g)
                c = c1 * c2 * g
                terms[m] = terms.get(m, Fraction(0)) + c
        return SqrtSum(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ParameterError("only nonnegative integer powers are exact here")
        result = SqrtSum.from_rational(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_rational(self):
        return all(m == 1 for m in self._terms)

    def as_fraction(self):
        if not self.is_rational():
            raise ParameterError(f"{self!r} is irrational")
        return self._terms.get(1, Fraction(0))

    def sign(self):
        """Exact sign in {-1, 0, 1}."""
        if not self._terms:
            return 0
        coeffs = list(self._terms.values())
        if all(c > 0 for c in coeffs):
            return 1
        if all(c < 0 for c in coeffs):
            return -1
        # mixed signs: the value is nonzero (linear independence), so the
        # interval refinement below terminates
        prec = 16
        while True:
            scale = 1 << prec
            lo = Fraction(0)
            hi = Fraction(0)
            for m, c in self._terms.items():
                r = isqrt(m * scale * scale)
                root_lo = Fraction(r, scale)
                root_hi = Fraction(r + 1, scale)
                if c > 0:
                    lo += c * root_lo
                    hi += c * root_hi
                else:
                    lo += c * root_hi
                    hi += c * root_lo
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            prec *= 2

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() == 0

    def __le__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() <= 0

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __ge__(self, other):
        return self._coerce(other) <= self

    def __gt__(self, other):
        return self._coerce(other) < self

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash(tuple(sorted(self._terms.items())))

    def __float__(self):
        return float(sum(float(c) * float(m) ** 0.5 for m, c in self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "SqrtSum(0)"
        parts = []
        for m, c in sorted(self._terms.items()):
            parts.append(str(c) if m == 1 else f"{c}*sqrt({m})")
        return f"SqrtSum({' + '.join(parts)})"


def rational_power(base, exponent):
    """base ** exponent for Fraction base >= 0 and exponent with denominator <= 2."""
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base < 0:
        raise ParameterError("negative base")
    a, b = exponent.numerator, exponent.denominator
    if a < 0:
        raise ParameterError("negative exponent")
    if b == 1:
        return SqrtSum.from_rational(base**a)
    if b == 2:
        return SqrtSum.sqrt(base**a)
    raise ParameterError(f"exponent {exponent} needs roots beyond square roots")


def pow_le(x, a, y, b):
    """Exact test x**a <= y**b for nonnegative SqrtSum values, integer powers."""
    x = SqrtSum._coerce(x)
    y = SqrtSum._coerce(y)
    return (y**b - x**a).sign() >= 0
