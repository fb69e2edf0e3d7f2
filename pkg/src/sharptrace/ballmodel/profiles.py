"""Radial mode profiles of the canonical extension in the unit ball.

A degree-``l`` mode of an extension is ``h(r) Y_l``. For the canonical
extension with ``gamma = m + 1/2`` the radial factor is ``phi_l(r^2) r^l``
with ``phi_l`` a polynomial of degree ``m``; for other orders it is a
Gauss hypergeometric function evaluated numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import DomainError, StructuralError, UsageError
from ..exactmath import (
    Poly,
    RadialPoly,
    gamma_ratio,
    hyp2f1_terminating,
    pochhammer,
)
from ..specfun import hyp2f1
from ..sphere import ModelParams, gjms_eigenvalue

__all__ = [
    "ModeProfile",
    "PhiFunction",
    "phi_profile",
    "canonical_profile",
    "phi_in_rho",
    "mode_laplacian",
    "laplacian_of_r_poly",
    "delta_k_Vm",
    "iterate_laplacian",
    "BoundaryTraces",
    "boundary_traces",
    "trace_coefficient",
    "second_normal_closed",
    "ModeEigenResult",
    "verify_mode_eigen",
]

ModeProfile = RadialPoly
HALF = Fraction(1, 2)


def _require_half_integer(params: ModelParams) -> int:
    if not params.is_half_integer:
        raise UsageError(f"exact profiles need gamma = m + 1/2, got {params.gamma}")
    return params.m


def _check_gamma(params: ModelParams) -> None:
    # Critical gamma = n/2 is admitted: the canonical profile stays finite
    # there and the Lebedev-Milin checks rely on it.
    if not 0 < params.gamma <= Fraction(params.n, 2):
        raise DomainError(f"gamma={params.gamma} outside (0, n/2]")


def canonical_profile(params: ModelParams, l: int) -> RadialPoly:
    """Exact ``phi_l(r^2) r^l`` for ``gamma = m + 1/2``.

    ``phi_l(R) = m!/(2m)! (l + (n+1)/2)_m F(l + (n-1)/2 - m, -m; l + (n+1)/2; R)``.
    """
    _check_gamma(params)
    m = _require_half_integer(params)
    if l < 0:
        raise UsageError("harmonic degree must be nonnegative")
    n = params.n
    c = l + Fraction(n + 1, 2)
    a = l + Fraction(n - 1, 2) - m
    pref = Fraction(math.factorial(m), math.factorial(2 * m)) * pochhammer(c, m)
    return RadialPoly(l, hyp2f1_terminating(a, -m, c) * pref)


@dataclass(frozen=True)
class PhiFunction:
    """Numeric ``phi_l(R)`` for a general order ``gamma``.

    ``phi_l(R) = Gamma(gamma+1/2)/Gamma(2 gamma) * Gamma(l+n/2+gamma)/Gamma(l+(n+1)/2)
    * F(l + n/2 - gamma, 1/2 - gamma; l + (n+1)/2; R)``, normalized so that
    ``phi_l(1) = 1``.
    """

    n: int
    gamma: float
    l: int
    prefactor: float = field(init=False)

    def __post_init__(self):
        g, n, l = self.gamma, self.n, self.l
        logp = (
            math.lgamma(g + 0.5)
            - math.lgamma(2 * g)
            + math.lgamma(l + n / 2 + g)
            - math.lgamma(l + (n + 1) / 2)
        )
        object.__setattr__(self, "prefactor", math.exp(logp))

    @property
    def abc(self):
        g, n, l = self.gamma, self.n, self.l
        return l + n / 2 - g, 0.5 - g, l + (n + 1) / 2

    def deriv(self, R: float, k: int = 0) -> float:
        """``k``-th derivative in ``R`` via ``d/dz F = ab/c F(a+1, b+1; c+1)``."""
        a, b, c = self.abc
        coef = self.prefactor
        for i in range(k):
            coef *= (a + i) * (b + i) / (c + i)
        return coef * hyp2f1(a + k, b + k, c + k, R)

    def __call__(self, R: float) -> float:
        return self.deriv(R, 0)

    def mode(self, r: float) -> float:
        """``phi_l(r^2) r^l``."""
        return self(r * r) * r**self.l


def phi_profile(params: ModelParams, l: int):
    """``phi_l``: exact :class:`RadialPoly` for half-integer orders, else :class:`PhiFunction`."""
    _check_gamma(params)
    if params.is_half_integer:
        return canonical_profile(params, l)
    return PhiFunction(params.n, float(params.gamma), l)


def phi_in_rho(params: ModelParams, l: int = 0) -> Poly:
    """``phi_l`` rewritten as an exact polynomial in ``rho = (1 - R)/2``."""
    p = canonical_profile(params, l).poly
    return p.compose(Poly([1, -2]))


def laplacian_of_r_poly(p: Poly, l: int, n: int) -> Poly:
    """Flat Laplacian in R^(n+1) of ``p(r) Y_l`` as a polynomial in ``r``.

    ``h'' + (n/r) h' - l(l+n-1) h / r^2``; raises when a negative power of
    ``r`` would survive.
    """
    c = p.coeffs
    out: dict[int, object] = {}
    ang = l * (l + n - 1)
    for i, ci in enumerate(c):
        if ci == 0:
            continue
        f = i * (i - 1) + n * i - ang
        if f == 0:
            continue
        out[i - 2] = out.get(i - 2, 0) + ci * f
    neg = [k for k, v in out.items() if k < 0 and v != 0]
    if neg:
        raise StructuralError(f"Laplacian leaves r^{min(neg)}; profile is not r^{l} * poly(r^2)")
    deg = max((k for k in out if out[k] != 0), default=-1)
    return Poly([out.get(k, 0) for k in range(deg + 1)])


def mode_laplacian(p: RadialPoly, n: int) -> RadialPoly:
    """Flat Laplacian of ``h(r) Y_l`` in R^(n+1) for ``h = r^l q(r^2)``.

    The ``r^(l+2j)`` coefficient maps to ``2j (2l + 2j + n - 1)`` times the
    ``r^(l+2j-2)`` coefficient; the ``j = 0`` term is harmonic.
    """
    l = p.l
    c = p.coeffs
    return RadialPoly(l, Poly(c[j] * (2 * j * (2 * l + 2 * j + n - 1)) for j in range(1, len(c))))


def iterate_laplacian(p: RadialPoly, n: int, k: int) -> RadialPoly:
    for _ in range(k):
        p = mode_laplacian(p, n)
    return p


def delta_k_Vm(params: ModelParams, l: int, k: int) -> RadialPoly:
    """Closed form of the degree-``l`` mode of ``Delta^k V_m``.

    ``4^k m!/(2m)! (c)_m (a)_k (-m)_k F(a + k, -m + k; c; r^2) r^l`` with
    ``a = l + (n-1)/2 - m`` and ``c = l + (n+1)/2``.
    """
    m = _require_half_integer(params)
    if not 0 <= k <= m + 1:
        raise UsageError(f"k={k} outside 0..{m + 1}")
    n = params.n
    a = l + Fraction(n - 1, 2) - m
    c = l + Fraction(n + 1, 2)
    pref = (
        4**k
        * Fraction(math.factorial(m), math.factorial(2 * m))
        * pochhammer(c, m)
        * pochhammer(a, k)
        * pochhammer(Fraction(-m), k)
    )
    if pref == 0:
        return RadialPoly(l, Poly())
    return RadialPoly(l, hyp2f1_terminating(a + k, -m + k, c) * pref)


# --------------------------------------------------------------------------
# boundary traces


def trace_coefficient(m: int, k: int) -> Fraction:
    """``m! Gamma(m-k+1/2) / (Gamma(m+1/2) (m-k)!)``, a rational number."""
    return gamma_ratio(m - k + HALF, m + HALF).rational() * Fraction(
        math.factorial(m), math.factorial(m - k)
    )


def boundary_constant(m: int) -> Fraction:
    """``c_m = Gamma(m+1) Gamma(1/2) / Gamma(m+1/2)``, rational after cancellation."""
    return trace_coefficient(m, m)


def _p_ratio(n: int, l: int, top: Fraction, bottom: Fraction) -> Fraction:
    num = gjms_eigenvalue(n, top, l)
    den = gjms_eigenvalue(n, bottom, l)
    if top == bottom:
        return Fraction(1)
    if den == 0:
        raise DomainError(f"GJMS symbol of order {2 * bottom} vanishes at l={l}")
    return num / den


def second_normal_closed(n: int, m: int, l: int) -> Fraction:
    """Closed form for the second radial derivative of the canonical mode at r=1.

    ``-l(l+n-1)/(2m-1) + (n-1-2m)[(m-1)n - m(2m-1)] / (2(2m-1))``.
    """
    d = 2 * m - 1
    return Fraction(-l * (l + n - 1), d) + Fraction((n - 1 - 2 * m) * ((m - 1) * n - m * d), 2 * d)


@dataclass(frozen=True)
class BoundaryTraces:
    """Exact boundary values of ``Delta^k V_m`` for a unit degree-``l`` mode.

    ``values[k]`` and ``normals[k]`` come from differentiating the exact
    profiles; ``closed_values`` / ``closed_normals`` from the spectral closed
    forms. ``residuals`` holds their differences, every one of which must be 0.
    """

    n: int
    m: int
    l: int
    values: tuple
    normals: tuple
    closed_values: tuple
    closed_normals: tuple
    second_normal: Fraction
    second_normal_closed: Fraction | None

    @property
    def residuals(self) -> dict:
        out = {}
        for k, (a, b) in enumerate(zip(self.values, self.closed_values)):
            out[f"value_k{k}"] = a - b
        for k, (a, b) in enumerate(zip(self.normals, self.closed_normals)):
            out[f"normal_k{k}"] = a - b
        if self.second_normal_closed is not None:
            out["second_normal"] = self.second_normal - self.second_normal_closed
        return out

    @property
    def ok(self) -> bool:
        return all(v == 0 for v in self.residuals.values())


def _second_deriv_at_one(p: RadialPoly) -> Fraction:
    rp = p.to_r_poly()
    return rp.deriv(2)(Fraction(1))


def boundary_traces(params: ModelParams, l: int) -> BoundaryTraces:
    """Boundary values and radial derivatives of ``Delta^k V_m`` at ``r = 1``."""
    m = _require_half_integer(params)
    n = params.n
    if 2 * m + 1 > n:
        raise DomainError(f"2m+1={2 * m + 1} exceeds n={n}")
    top = m + HALF
    values, normals, cv, cn = [], [], [], []
    profile = canonical_profile(params, l)
    for k in range(m + 1):
        pk = iterate_laplacian(profile, n, k)
        values.append(pk.value_at_one())
        normals.append(pk.deriv_at_one())
        coef = (-1) ** k * trace_coefficient(m, k)
        ratio = _p_ratio(n, l, top, top - k)
        v = coef * ratio
        cv.append(v)
        if k <= m - 1:
            cn.append(-(Fraction(n - 1, 2) - m + k) * v)
        else:
            p = gjms_eigenvalue(n, top, l)
            p1 = gjms_eigenvalue(n, HALF, l)
            cn.append((-1) ** m * boundary_constant(m) * (p - Fraction(n - 1, 2) * p / p1))
    closed = second_normal_closed(n, m, l) if m >= 1 else None
    return BoundaryTraces(
        n, m, l, tuple(values), tuple(normals), tuple(cv), tuple(cn),
        _second_deriv_at_one(profile), closed,
    )


# --------------------------------------------------------------------------
# eigen-equation check


@dataclass(frozen=True)
class ModeEigenResult:
    exact: bool
    residual: object  # RadialPoly (exact path) or max abs float
    samples: tuple = ()
    tau_residual: Poly | None = None

    @property
    def ok(self) -> bool:
        if self.exact:
            res_ok = self.residual.is_zero()
        else:
            res_ok = self.residual < 1e-10
        if self.tau_residual is not None:
            res_ok = res_ok and self.tau_residual.is_zero()
        return res_ok


def verify_mode_eigen(params: ModelParams, l: int, r_samples=None) -> ModeEigenResult:
    """Check that ``rho^(n-s) phi_l(r^2) r^l Y_l`` solves ``(Delta_g + s(n-s)) u = 0``.

    In flat terms, with ``p = 1/2 - gamma`` and ``G = phi_l(r^2) r^l``::

        rho^2 Delta G - 2 p rho (r G') - p (n+1) rho G + p (p-1) r^2 G + (1/4 - gamma^2) G = 0

    Exact polynomial identity for half-integer orders, sampled otherwise.
    At the critical order the logarithmic potential is checked as well.
    """
    tau = None
    if params.is_critical and params.n % 2 == 1:
        from .metric import tau_laplacian_residual

        tau = tau_laplacian_residual(params.n)
    n = params.n
    if params.is_half_integer:
        g = params.gamma
        p = HALF - g
        G = canonical_profile(params, l)
        rho = Poly([HALF, -HALF])
        R = Poly.x()
        lap = mode_laplacian(G, n)
        res = (
            lap.times_r2_poly(rho * rho)
            - G.r_d_dr().times_r2_poly(rho * (2 * p))
            - G.times_r2_poly(rho * (p * (n + 1)))
            + G.times_r2_poly(R * (p * (p - 1)))
            + G.scale(Fraction(1, 4) - g * g)
        )
        return ModeEigenResult(True, res, (), tau)
    g = float(params.gamma)
    p = 0.5 - g
    phi = PhiFunction(n, g, l)
    rs = tuple(r_samples) if r_samples is not None else tuple(np.round(np.arange(0.1, 0.95, 0.1), 10))
    worst = 0.0
    for r in rs:
        R = r * r
        rho = (1 - R) / 2
        f0, f1, f2 = phi.deriv(R, 0), phi.deriv(R, 1), phi.deriv(R, 2)
        lap = 4 * R * f2 + (4 * l + 2 * n + 2) * f1
        rg = l * f0 + 2 * R * f1
        res = rho * rho * lap - 2 * p * rho * rg - p * (n + 1) * rho * f0 + p * (p - 1) * R * f0 + (0.25 - g * g) * f0
        scale = max(1.0, abs(f0), abs(rho * rho * lap))
        worst = max(worst, abs(res) / scale)
    return ModeEigenResult(False, worst, rs, tau)
