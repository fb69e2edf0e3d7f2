"""Exact arithmetic: rationals with a sqrt(pi) tag, half-integer Gamma,
Pochhammer symbols, terminating hypergeometric sums and radial polynomials.

Everything here is immutable. Polynomial coefficients are ``Fraction`` on the
exact path; floats are accepted wherever the arithmetic makes sense so the
same classes carry numeric perturbations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Iterable, Sequence

from .errors import DomainError, SqrtPiExponentError, StructuralError, UsageError

__all__ = [
    "ExactScalar",
    "HalfInt",
    "Poly",
    "RadialPoly",
    "as_fraction",
    "gamma_half",
    "gamma_ratio",
    "pochhammer",
    "hyp2f1_terminating",
    "radial_integrate",
]


def as_fraction(x) -> Fraction:
    """Convert ints, Fractions, HalfInts and exact decimal strings to Fraction."""
    if isinstance(x, HalfInt):
        return x.value
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if not x.is_integer() and not (2 * x).is_integer():
            raise UsageError(f"float {x!r} is not exactly representable as a half-integer")
        return Fraction(x)
    raise UsageError(f"cannot convert {type(x).__name__} to an exact rational")


# --------------------------------------------------------------------------
# ExactScalar


@dataclass(frozen=True)
class ExactScalar:
    """``q * sqrt(pi)**e`` with ``q`` rational and ``e`` in {-1, 0, 1}.

    Addition requires equal ``e``. Products that would reach ``|e| = 2``
    raise :class:`SqrtPiExponentError` instead of folding pi into ``q``.
    """

    q: Fraction
    e: int = 0

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.e not in (-1, 0, 1):
            raise SqrtPiExponentError(f"sqrt(pi) exponent {self.e} out of range")
        if self.q == 0:
            object.__setattr__(self, "e", 0)

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        return cls(as_fraction(x), 0)

    @property
    def is_rational(self) -> bool:
        return self.e == 0

    def rational(self) -> Fraction:
        if self.e != 0:
            raise SqrtPiExponentError(f"{self} is not rational")
        return self.q

    def __add__(self, other):
        other = ExactScalar.coerce(other)
        if self.q == 0:
            return other
        if other.q == 0:
            return self
        if self.e != other.e:
            raise SqrtPiExponentError(f"cannot add {self} and {other}")
        return ExactScalar(self.q + other.q, self.e)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.q, self.e)

    def __sub__(self, other):
        return self + (-ExactScalar.coerce(other))

    def __rsub__(self, other):
        return ExactScalar.coerce(other) - self

    def __mul__(self, other):
        other = ExactScalar.coerce(other)
        return ExactScalar(self.q * other.q, self._exp(self.e + other.e, self.q * other.q))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactScalar.coerce(other)
        if other.q == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar(self.q / other.q, self._exp(self.e - other.e, self.q))

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) / self

    def __pow__(self, k: int):
        out = ExactScalar(1)
        base = self if k >= 0 else ExactScalar(1) / self
        for _ in range(abs(k)):
            out = out * base
        return out

    @staticmethod
    def _exp(e: int, q: Fraction) -> int:
        if q == 0:
            return 0
        if e not in (-1, 0, 1):
            raise SqrtPiExponentError(f"result would carry sqrt(pi)**{e}")
        return e

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactScalar(other)
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.q == other.q and self.e == other.e

    def __hash__(self):
        return hash((self.q, self.e))

    def __float__(self):
        return float(self.q) * math.sqrt(math.pi) ** self.e

    def __str__(self):
        if self.e == 0:
            return str(self.q)
        if self.e == 1:
            return f"{self.q}*sqrt(pi)"
        return f"{self.q}/sqrt(pi)"


# --------------------------------------------------------------------------
# HalfInt


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """An exact half-integer stored as twice its value."""

    twice_value: int

    @classmethod
    def of(cls, x) -> "HalfInt":
        if isinstance(x, HalfInt):
            return x
        f = as_fraction(x) * 2
        if f.denominator != 1:
            raise DomainError(f"{x} is not a half-integer")
        return cls(int(f))

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice_value, 2)

    @property
    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def __add__(self, other):
        return HalfInt(self.twice_value + HalfInt.of(other).twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.twice_value - HalfInt.of(other).twice_value)

    def __rsub__(self, other):
        return HalfInt.of(other) - self

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __lt__(self, other):
        return self.twice_value < HalfInt.of(other).twice_value

    def __eq__(self, other):
        try:
            return self.twice_value == HalfInt.of(other).twice_value
        except (DomainError, UsageError):
            return False

    def __hash__(self):
        return hash(self.twice_value)

    def __float__(self):
        return self.twice_value / 2

    def __str__(self):
        return str(self.value)


# --------------------------------------------------------------------------
# Gamma and Pochhammer


def gamma_half(x) -> ExactScalar:
    """Gamma at a positive half-integer, exactly.

    >>> str(gamma_half(Fraction(5, 2)))
    '3/4*sqrt(pi)'
    """
    h = HalfInt.of(x)
    if h.twice_value <= 0:
        raise DomainError(f"gamma_half needs a positive argument, got {h}")
    if h.is_integer:
        return ExactScalar(math.factorial(h.twice_value // 2 - 1))
    k = (h.twice_value - 1) // 2
    return ExactScalar(Fraction(math.factorial(2 * k), 4**k * math.factorial(k)), 1)


def gamma_ratio(x, y) -> ExactScalar:
    """``Gamma(x) / Gamma(y)`` for positive half-integers ``x``, ``y``."""
    hx, hy = HalfInt.of(x), HalfInt.of(y)
    if hx.twice_value <= 0 or hy.twice_value <= 0:
        raise DomainError(f"gamma_ratio needs positive arguments, got ({hx}, {hy})")
    diff = hx - hy
    if diff.is_integer:
        d = diff.twice_value // 2
        if d >= 0:
            return ExactScalar(pochhammer(hy.value, d))
        return ExactScalar(1 / pochhammer(hx.value, -d))
    return gamma_half(hx) / gamma_half(hy)


def pochhammer(a, k: int):
    """Rising factorial ``a (a+1) ... (a+k-1)``; ``(a)_0 = 1``.

    Works for any ring element supporting ``+ int`` and ``*`` (Fraction,
    float, :class:`Poly`).
    """
    if k < 0:
        raise UsageError("pochhammer index must be nonnegative")
    out = a * 0 + 1
    for i in range(k):
        out = out * (a + i)
    return out


# --------------------------------------------------------------------------
# Polynomials


def _strip(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Univariate polynomial, coefficients lowest degree first.

    Coefficients may be Fractions, floats or nested ``Poly`` objects.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z):
        acc = z * 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        o = self._lift(other).coeffs
        s = self.coeffs
        n = max(len(s), len(o))
        return Poly(
            (s[i] if i < len(s) else 0) + (o[i] if i < len(o) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] = out[i + j] + ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def deriv(self, k: int = 1) -> "Poly":
        c = list(self.coeffs)
        for _ in range(k):
            c = [i * c[i] for i in range(1, len(c))]
        return Poly(c)

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


@dataclass(frozen=True)
class RadialPoly:
    """``h(r) = r**l * sum_j coeffs[j] * r**(2j)``.

    This is the radial factor of a degree-``l`` mode ``h(r) Y_l``.
    """

    l: int
    poly: Poly

    def __post_init__(self):
        if self.l < 0:
            raise StructuralError(f"negative harmonic degree {self.l}")
        if not isinstance(self.poly, Poly):
            object.__setattr__(self, "poly", Poly(self.poly))

    @classmethod
    def from_coeffs(cls, l: int, coeffs: Iterable) -> "RadialPoly":
        return cls(l, Poly(coeffs))

    @classmethod
    def from_r_poly(cls, p: Poly, l: int) -> "RadialPoly":
        """Reinterpret a polynomial in ``r`` as ``r**l * q(r**2)``."""
        c = p.coeffs
        out = []
        for i, ci in enumerate(c):
            if ci == 0:
                continue
            d = i - l
            if d < 0 or d % 2:
                raise StructuralError(f"power r^{i} does not fit r^{l} * poly(r^2)")
        for j in range((len(c) - l + 1) // 2 if len(c) > l else 0):
            out.append(c[l + 2 * j])
        return cls(l, Poly(out))

    @property
    def coeffs(self) -> tuple:
        return self.poly.coeffs

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def to_r_poly(self) -> Poly:
        out = [0] * (self.l + 2 * len(self.coeffs))
        for j, c in enumerate(self.coeffs):
            out[self.l + 2 * j] = c
        return Poly(out)

    def __call__(self, r):
        return r**self.l * self.poly(r * r)

    def __add__(self, other: "RadialPoly"):
        if other.l != self.l:
            raise StructuralError(f"cannot add profiles of degree {self.l} and {other.l}")
        return RadialPoly(self.l, self.poly + other.poly)

    def __sub__(self, other: "RadialPoly"):
        return self + (-other)

    def __neg__(self):
        return RadialPoly(self.l, -self.poly)

    def scale(self, c) -> "RadialPoly":
        return RadialPoly(self.l, self.poly * c)

    def times_r2_poly(self, p: Poly) -> "RadialPoly":
        """Multiply by a polynomial in ``r**2`` (keeps the ``r**l`` prefactor)."""
        return RadialPoly(self.l, self.poly * p)

    def __mul__(self, other):
        if isinstance(other, RadialPoly):
            return RadialPoly(self.l + other.l, self.poly * other.poly)
        return self.scale(other)

    __rmul__ = __mul__

    def r_d_dr(self) -> "RadialPoly":
        """``r h'(r)``, again of the form ``r**l * poly(r**2)``."""
        p = self.poly
        rr = Poly.x()
        return RadialPoly(self.l, p * self.l + rr * p.deriv() * 2)

    def d_dr(self) -> "RadialPoly":
        """``h'(r)`` as a radial polynomial with prefactor ``r**(l-1)`` (or ``r`` when l=0)."""
        p = self.poly
        if self.l >= 1:
            return RadialPoly(self.l - 1, p * self.l + Poly.x() * p.deriv() * 2)
        return RadialPoly(1, p.deriv() * 2)

    def value_at_one(self):
        return self.poly(1)

    def deriv_at_one(self):
        return self.l * self.poly(1) + 2 * self.poly.deriv()(1)

    def integrate(self, weight_exponent: int):
        """``int_0^1 h(r) r**w dr`` exactly."""
        return radial_integrate(self, weight_exponent)


def radial_integrate(p, weight_exponent: int):
    """``int_0^1 p(r) r**w dr`` for a polynomial ``p`` in ``r``.

    ``p`` may be a :class:`Poly` in ``r`` or a :class:`RadialPoly`.
    """
    w = weight_exponent
    if w < 0:
        raise UsageError("weight exponent must be nonnegative")
    if isinstance(p, RadialPoly):
        terms = ((p.l + 2 * j, c) for j, c in enumerate(p.coeffs))
    else:
        terms = enumerate(p.coeffs)
    total = Fraction(0)
    for power, c in terms:
        total = total + c * Fraction(1, power + w + 1)
    return total


# --------------------------------------------------------------------------
# Terminating 2F1


def _termination_index(a: Fraction, b: Fraction) -> int | None:
    cands = [-int(x) for x in (a, b) if x.denominator == 1 and x <= 0]
    return min(cands) if cands else None


def hyp2f1_terminating(a, b, c) -> Poly:
    """``F(a, b; c; z)`` as an exact polynomial in ``z``.

    One of ``a``, ``b`` must be a nonpositive integer.
    """
    a, b, c = as_fraction(a), as_fraction(b), as_fraction(c)
    K = _termination_index(a, b)
    if K is None:
        raise UsageError(f"F({a}, {b}; {c}; z) does not terminate")
    coeffs = []
    term = Fraction(1)
    for k in range(K + 1):
        if k > 0:
            den = (c + k - 1) * k
            if c + k - 1 == 0:
                raise DomainError(f"(c)_k vanishes before termination: c={c}, k={k}")
            term = term * (a + k - 1) * (b + k - 1) / den
        coeffs.append(term)
    return Poly(coeffs)
