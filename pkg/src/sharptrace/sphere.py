"""Spectral calculus on the round sphere S^n: model parameters, the
fractional GJMS symbol, the Funk-Hecke eigenvalue of a zonal kernel and
Gegenbauer expansions of zonal boundary data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import special

from .errors import DomainError, UsageError
from .exactmath import as_fraction, pochhammer
from .specfun import gegenbauer_all, gegenbauer_norm_sq, quad_rule

__all__ = [
    "ModelParams",
    "SpectralSymbol",
    "gjms_symbol",
    "gjms_eigenvalue",
    "b_symbol",
    "ZonalFunction",
    "zonal_expand",
    "funk_hecke_lambda",
    "sphere_volume",
    "sphere_volume_exact",
]


@dataclass(frozen=True)
class ModelParams:
    """Dimension ``n`` of the boundary sphere and the order ``gamma``.

    ``gamma`` is a Fraction when ``2*gamma`` is an integer (exact path) and a
    float otherwise. ``m`` is set when ``gamma = m + 1/2``.
    """

    n: int
    gamma: Fraction | float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"sphere dimension must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        g = self.gamma
        if not isinstance(g, Fraction):
            if isinstance(g, int) or (isinstance(g, float) and (2 * g).is_integer()):
                g = Fraction(g)
            elif isinstance(g, str):
                g = Fraction(g)
            else:
                g = float(g)
        if isinstance(g, Fraction) and g.denominator not in (1, 2):
            g = float(g)
        object.__setattr__(self, "gamma", g)
        if not 0 < g <= Fraction(self.n, 2):
            raise DomainError(f"gamma={g} outside (0, n/2] for n={self.n}")

    @classmethod
    def half_integer(cls, n: int, m: int) -> "ModelParams":
        return cls(n, Fraction(2 * m + 1, 2))

    @classmethod
    def general(cls, n: int, gamma) -> "ModelParams":
        return cls(n, gamma)

    @property
    def exact(self) -> bool:
        return isinstance(self.gamma, Fraction)

    @property
    def is_half_integer(self) -> bool:
        return self.exact and self.gamma.denominator == 2

    @property
    def m(self) -> int:
        if not self.is_half_integer:
            raise UsageError(f"gamma={self.gamma} is not of the form m + 1/2")
        return int(self.gamma - Fraction(1, 2))

    @property
    def s(self):
        return Fraction(self.n, 2) + self.gamma if self.exact else self.n / 2 + self.gamma

    @property
    def is_critical(self) -> bool:
        return self.gamma == Fraction(self.n, 2)

    @property
    def is_subcritical_half_integer(self) -> bool:
        return self.is_half_integer and 2 * self.m + 1 < self.n

    def describe(self) -> dict:
        out = {"n": self.n, "gamma": str(self.gamma)}
        if self.is_half_integer:
            out["m"] = self.m
        return out


@dataclass(frozen=True)
class SpectralSymbol:
    """A map ``l -> eigenvalue`` for an operator diagonal on spherical harmonics."""

    evaluator: Callable[[int], object]
    tag: str
    exact: bool

    def __call__(self, l: int):
        if l < 0:
            raise UsageError("harmonic degree must be nonnegative")
        return self.evaluator(l)

    def values(self, L: int) -> list:
        return [self(l) for l in range(L + 1)]


def gjms_eigenvalue(n: int, gamma, l: int):
    """``Gamma(l + n/2 + gamma) / Gamma(l + n/2 - gamma)``.

    Exact (a Fraction) whenever ``2*gamma`` is an integer; the product form
    also gives the analytic value 0 at the critical degeneracy ``l = 0``,
    ``gamma = n/2``.
    """
    if isinstance(gamma, Fraction) or isinstance(gamma, int):
        g = as_fraction(gamma)
        if (2 * g).denominator == 1:
            return pochhammer(l + Fraction(n, 2) - g, int(2 * g))
    g = float(gamma)
    if l == 0 and g == n / 2:
        return 0.0
    lo = l + n / 2 - g
    if lo <= 0 and lo == int(lo):
        raise DomainError(f"pole of Gamma(l + n/2 - gamma) at l={l}, gamma={g}")
    return float(special.poch(lo, 2 * g))


def gjms_symbol(params: ModelParams, gamma=None) -> SpectralSymbol:
    """Symbol of the GJMS operator of order ``2*gamma`` (default ``params.gamma``)."""
    g = params.gamma if gamma is None else ModelParams(params.n, gamma).gamma
    n = params.n
    exact = isinstance(g, Fraction)
    return SpectralSymbol(lambda l: gjms_eigenvalue(n, g, l), f"P_{2 * g}(n={n})", exact)


def b_symbol(n: int) -> SpectralSymbol:
    """``B Y_l = (l + (n-1)/2) Y_l``."""
    h = Fraction(n - 1, 2)
    return SpectralSymbol(lambda l: l + h, f"B(n={n})", True)


def sphere_volume(n: int) -> float:
    """``omega_n = 2 pi^((n+1)/2) / Gamma((n+1)/2)``, the area of S^n."""
    return 2 * math.pi ** ((n + 1) / 2) / math.gamma((n + 1) / 2)


def sphere_volume_exact(n: int):
    """``omega_n`` as ``(rational, power of pi)``."""
    if n % 2 == 1:
        k = (n + 1) // 2
        return Fraction(2, math.factorial(k - 1)), k
    # n even: Gamma((n+1)/2) carries sqrt(pi), so omega_n = q * pi^(n/2)
    k = n // 2
    g = Fraction(math.factorial(2 * k), 4**k * math.factorial(k))
    return 2 / g, k


def _alpha(n: int) -> float:
    return (n - 1) / 2


def funk_hecke_lambda(K, l: int, n: int, order: int = 200) -> float:
    """Funk-Hecke eigenvalue of the zonal kernel ``K`` on degree ``l``.

    ``K`` is called on a numpy array of nodes in (-1, 1).
    """
    rule = quad_rule("sphere", n, order)
    t = rule.nodes
    C = gegenbauer_all(_alpha(n), l, t)[l]
    integral = rule.integrate_values(np.asarray(K(t), dtype=float) * C)
    logpre = (
        (n - 1) / 2 * math.log(4 * math.pi)
        + math.lgamma(l + 1)
        + math.lgamma((n - 1) / 2)
        - math.lgamma(l + n - 1)
    )
    return math.exp(logpre) * integral


@dataclass(frozen=True)
class ZonalFunction:
    """``f(t) = sum_l coeffs[l] * C_l^((n-1)/2)(t)`` on S^n.

    ``source`` optionally keeps the pointwise function the expansion came
    from; the kernel extension path evaluates it directly.
    """

    coeffs: tuple
    n: int
    source: Callable | None = field(default=None, compare=False)
    reconstruction_error: float = 0.0
    warnings: tuple = ()
    label: str = "custom"

    @property
    def L(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, coeffs, n: int, label: str = "custom") -> "ZonalFunction":
        return cls(tuple(float(c) for c in coeffs), n, None, 0.0, (), label)

    def __call__(self, t):
        C = gegenbauer_all(_alpha(self.n), self.L, t)
        return np.tensordot(np.asarray(self.coeffs, dtype=float), C, axes=1)

    def pointwise(self, t):
        """Source function if known, else the resummed expansion."""
        if self.source is not None:
            return np.asarray(self.source(np.asarray(t, dtype=float)), dtype=float)
        return self(t)

    def mode_norms_sq(self) -> list[float]:
        """Squared L^2(S^n) norms of the degree-l components.

        For a zonal component ``f_l C_l(<xi, e>)`` this is
        ``omega_{n-1} h_l f_l^2`` with ``h_l`` the Gegenbauer norm.
        """
        w = sphere_volume(self.n - 1) if self.n >= 2 else 2.0
        a = _alpha(self.n)
        return [w * gegenbauer_norm_sq(a, l) * c * c for l, c in enumerate(self.coeffs)]


def zonal_expand(
    g: Callable,
    n: int,
    L: int = 40,
    order: int = 200,
    tol: float = 1e-8,
    label: str = "custom",
    check_points=(-0.9, -0.5, 0.0, 0.5, 0.9),
) -> ZonalFunction:
    """Gegenbauer coefficients of ``g`` up to degree ``L``.

    The pointwise reconstruction error at ``check_points`` is stored; if it
    exceeds ``tol`` a warning string is attached instead of raising.
    """
    if L < 0:
        raise UsageError("truncation degree must be nonnegative")
    rule = quad_rule("sphere", n, order)
    t = rule.nodes
    a = _alpha(n)
    C = gegenbauer_all(a, L, t)
    gv = np.asarray(g(t), dtype=float)
    coeffs = tuple(
        rule.integrate_values(gv * C[l]) / gegenbauer_norm_sq(a, l) for l in range(L + 1)
    )
    z = ZonalFunction(coeffs, n, g, 0.0, (), label)
    pts = np.asarray(check_points, dtype=float)
    exact = np.asarray(g(pts), dtype=float)
    err = float(np.max(np.abs(z(pts) - exact) / np.maximum(1.0, np.abs(exact))))
    warnings = ()
    if not err <= tol:
        warnings = (f"reconstruction error {err:.3e} exceeds {tol:.1e} at L={L}",)
    return ZonalFunction(coeffs, n, g, err, warnings, label)
