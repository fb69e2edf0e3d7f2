"""Exact Dirichlet energies of ball extensions and the boundary symbol
that closes the energy identity

    c_m * sum_l p_(2m+1)(l) a_l^2 = energy + sum_l t_m(l) a_l^2

for the canonical extension with unit boundary modes ``a_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import UsageError
from ..exactmath import Poly, RadialPoly, gamma_ratio, radial_integrate
from ..sphere import ModelParams, SpectralSymbol, gjms_eigenvalue
from .profiles import (
    HALF,
    boundary_constant,
    canonical_profile,
    iterate_laplacian,
    trace_coefficient,
)

__all__ = [
    "mode_energy",
    "exact_energy",
    "unit_mode_energy",
    "derive_boundary_symbol",
    "printed_boundary_symbol",
    "printed_boundary_value",
    "two_sphere_boundary_form",
    "EnergyIdentity",
    "energy_identity_check",
    "green_first_step",
    "perturbation_profile",
    "boundary_constant",
]


def mode_energy(p: RadialPoly, n: int, m: int):
    """``int_B |nabla^(m+1) (h Y_l)|^2`` for a unit-norm harmonic ``Y_l``.

    ``nabla^(m+1)`` is ``Delta^((m+1)/2)`` for odd ``m`` and
    ``nabla Delta^(m/2)`` for even ``m``.
    """
    if m < 0:
        raise UsageError("order m must be nonnegative")
    l = p.l
    if m % 2 == 1:
        g = iterate_laplacian(p, n, (m + 1) // 2)
        return radial_integrate(g * g, n)
    g = iterate_laplacian(p, n, m // 2)
    dg = g.d_dr()
    total = radial_integrate(dg * dg, n)
    ang = l * (l + n - 1)
    if ang:
        # g^2 carries r^(2l) with l >= 1, so r^(n-2) never makes the integrand singular
        assert 2 * l + n - 2 >= 0
        total = total + ang * radial_integrate(g * g, n - 2)
    return total


def exact_energy(profiles, params: ModelParams):
    """Sum of :func:`mode_energy` over mutually orthogonal modes.

    Cross-mode terms vanish because distinct unit harmonics are orthogonal
    in L^2(S^n).
    """
    m = params.m
    total = Fraction(0)
    for p in profiles:
        total = total + mode_energy(p, params.n, m)
    return total


@lru_cache(maxsize=4096)
def _unit_mode_energy(n: int, m: int, l: int) -> Fraction:
    return mode_energy(canonical_profile(ModelParams.half_integer(n, m), l), n, m)


def unit_mode_energy(params: ModelParams, l: int) -> Fraction:
    """``e_m(l)``: energy of the canonical extension of a unit degree-``l`` mode."""
    return _unit_mode_energy(params.n, params.m, l)


def derive_boundary_symbol(params: ModelParams) -> SpectralSymbol:
    """``t_m(l) = c_m p_(2m+1)(l) - e_m(l)``, the boundary symbol closing the identity."""
    n, m = params.n, params.m
    if 2 * m + 1 > n:
        raise UsageError(f"2m+1={2 * m + 1} exceeds n={n}")
    c = boundary_constant(m)
    top = m + HALF

    def t(l: int) -> Fraction:
        return c * gjms_eigenvalue(n, top, l) - _unit_mode_energy(n, m, l)

    return SpectralSymbol(t, f"t_{m}(n={n})", True)


def two_sphere_boundary_form(n: int, l: int) -> Fraction:
    """``2 l(l+n-1) + (n+1)(n-3)/2``: the m=1 boundary form with gradient term."""
    return 2 * l * (l + n - 1) + Fraction((n + 1) * (n - 3), 2)


def _sum_coefficient(m: int, k: int) -> Fraction:
    # Gamma(m+1)^2/Gamma(m+1/2)^2 * Gamma(k+1/2) Gamma(m-k+1/2) / (k! (m-k)!)
    first = gamma_ratio(k + HALF, m + HALF).rational() * Fraction(math.factorial(m), math.factorial(k))
    return first * trace_coefficient(m, k)


def printed_boundary_value(n: int, m: int, l: int, first_coefficient=None) -> Fraction:
    """Boundary operator in its printed form, first coefficient ``(n-1)/2``.

    ``first_coefficient`` overrides ``(n-1)/2``; passing ``m`` gives the
    form that the Green reduction actually produces.
    """
    top = m + HALF
    P = lambda g: gjms_eigenvalue(n, g, l)  # noqa: E731
    p = P(top)
    c = boundary_constant(m)
    a = Fraction(n - 1, 2) if first_coefficient is None else Fraction(first_coefficient)
    total = a * c * p / P(HALF)
    upper = (m - 1) // 2 if m % 2 == 1 else m // 2 - 1
    for k in range(1, upper + 1):
        total += (m - 2 * k) * _sum_coefficient(m, k) * p * p / (P(top - k) * P(Fraction(2 * k + 1, 2)))
    if m % 2 == 0 and m >= 2:
        half = Fraction(m + 1, 2)
        coef = gamma_ratio(half, m + HALF).rational() * Fraction(math.factorial(m), math.factorial(m // 2))
        total += Fraction(n - 1 - m, 2) * coef * coef * p * p / (P(half) * P(half))
    return total


def printed_boundary_symbol(params: ModelParams) -> SpectralSymbol:
    n, m = params.n, params.m
    return SpectralSymbol(lambda l: printed_boundary_value(n, m, l), f"T_{m}printed(n={n})", True)


def green_first_step(params: ModelParams, l: int) -> dict:
    """First Green identity for a unit canonical mode, all terms exact.

    ``0 = int_B V Delta^(m+1) V = int_B Delta V Delta^m V + V dr(Delta^m V) - dr(V) Delta^m V``
    at ``r = 1``. Also returns the boundary pair in closed form, which
    equals ``(-1)^m c_m (p_(2m+1) - m p_(2m+1)/p_1)``.
    """
    n, m = params.n, params.m
    V = canonical_profile(params, l)
    DV = iterate_laplacian(V, n, 1)
    DmV = iterate_laplacian(V, n, m)
    interior = radial_integrate(DV * DmV, n)
    boundary = V.value_at_one() * DmV.deriv_at_one() - V.deriv_at_one() * DmV.value_at_one()
    p = gjms_eigenvalue(n, m + HALF, l)
    p1 = gjms_eigenvalue(n, HALF, l)
    closed = (-1) ** m * boundary_constant(m) * (p - m * p / p1)
    only_first = (-1) ** m * boundary_constant(m) * (p - Fraction(n - 1, 2) * p / p1)
    return {
        "interior": interior,
        "boundary": boundary,
        "residual": interior + boundary,
        "boundary_closed": closed,
        "boundary_residual": boundary - closed,
        "boundary_single_term": only_first,
    }


@dataclass(frozen=True)
class EnergyIdentity:
    n: int
    m: int
    l: int
    beckner_form: Fraction  # c_m p_(2m+1)(l)
    energy: Fraction
    derived: Fraction
    printed: Fraction
    residual_derived: Fraction
    residual_paper: Fraction
    residual_two_sphere: Fraction | None


def energy_identity_check(params: ModelParams, l: int) -> EnergyIdentity:
    n, m = params.n, params.m
    c = boundary_constant(m)
    cp = c * gjms_eigenvalue(n, m + HALF, l)
    e = unit_mode_energy(params, l)
    t = derive_boundary_symbol(params)(l)
    T = printed_boundary_value(n, m, l)
    two = cp - e - two_sphere_boundary_form(n, l) if m == 1 else None
    return EnergyIdentity(n, m, l, cp, e, t, T, cp - e - t, cp - e - T, two)


def perturbation_profile(l: int, m: int, q) -> RadialPoly:
    """``w = (1 - r^2)^(m+1) q(r^2) r^l``: vanishes to order ``m+1`` at ``r = 1``."""
    base = Poly([1, -1]) ** (m + 1)
    qq = q if isinstance(q, Poly) else Poly(q)
    return RadialPoly(l, base * qq)
