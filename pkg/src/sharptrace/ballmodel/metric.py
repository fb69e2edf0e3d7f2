"""Adapted metrics on the ball: the factor psi_gamma with
``g* = psi_gamma^(4/(n-2 gamma)) |dx|^2`` and, at the critical order
``gamma = n/2`` (n odd), the conformal factor ``e^(2 tau) rho^-2``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..errors import DomainError, UnsupportedRegimeError, UsageError
from ..exactmath import Poly, pochhammer
from ..specfun import hyp2f1
from ..sphere import ModelParams
from .profiles import PhiFunction

__all__ = [
    "AdaptedMetricFactor",
    "adapted_metric",
    "adapted_metric_factor",
    "conformal_factor",
    "psi_polynomial",
    "psi_general",
    "psi_connection",
    "inverse_d_gamma",
    "critical_potential",
    "critical_potential_pochhammer",
    "hyperbolic_radial_laplacian",
    "tau_laplacian_residual",
    "dimension_limit",
    "psi_real_dimension",
]


def psi_polynomial(n: int, m: int) -> Poly:
    """``psi_(m+1/2)(rho) = sum_k ((n-1)/2-m)_k (-m)_k / ((-2m)_k k!) (2 rho)^k``."""
    a = Fraction(n - 1, 2) - m
    coeffs = []
    for k in range(m + 1):
        c = pochhammer(a, k) * pochhammer(Fraction(-m), k) / (pochhammer(Fraction(-2 * m), k) * math.factorial(k))
        coeffs.append(c * 2**k)
    return Poly(coeffs)


def psi_real_dimension(nr: float, m: int, rho: float) -> tuple[float, float]:
    """``(psi - 1, psi)`` for a real dimension ``nr``; ``psi - 1`` summed directly."""
    a = (nr - 1) / 2 - m
    term = 1.0
    tail = []
    for k in range(1, m + 1):
        term *= (a + k - 1) * (-m + k - 1) / ((-2 * m + k - 1) * k) * 2 * rho
        tail.append(term)
    d = math.fsum(tail)
    return d, 1.0 + d


def inverse_d_gamma(gamma: float) -> float:
    """``1/d_gamma = Gamma(-gamma) / (2^(2 gamma) Gamma(gamma))``."""
    return math.gamma(-gamma) / (2 ** (2 * gamma) * math.gamma(gamma))


def psi_connection(n: int, gamma: float, rho: float) -> float:
    """Two-branch hypergeometric form of ``psi_gamma`` (``2 gamma`` not an integer)."""
    if float(2 * gamma).is_integer():
        raise UnsupportedRegimeError("two-branch form needs 2*gamma not an integer")
    z = 2 * rho
    f = hyp2f1(n / 2 - gamma, 0.5 - gamma, 1 - 2 * gamma, z)
    coef = inverse_d_gamma(gamma) * math.gamma(n / 2 + gamma) / math.gamma(n / 2 - gamma)
    h = hyp2f1(0.5 + gamma, n / 2 + gamma, 1 + 2 * gamma, z)
    return f + rho ** (2 * gamma) * coef * h


def psi_general(n: int, gamma: float, rho: float) -> float:
    """``psi_gamma(rho) = phi_0(1 - 2 rho)``; uses the two-branch form when available."""
    try:
        return psi_connection(n, gamma, rho)
    except UnsupportedRegimeError:
        return PhiFunction(n, gamma, 0)(1 - 2 * rho)


def critical_potential(n: int) -> Poly:
    """``S(rho) = tau - ln rho`` at the critical order, n odd.

    ``S = Gamma((n+1)/2)/Gamma(n) sum_{k=1}^{(n-1)/2} Gamma(n-k) / (Gamma((n+1)/2-k) k) (2 rho)^k``.
    """
    if n % 2 == 0:
        raise DomainError("the critical potential needs n odd")
    h = (n + 1) // 2
    coeffs = [Fraction(0)]
    for k in range(1, (n - 1) // 2 + 1):
        c = Fraction(math.factorial(h - 1), math.factorial(n - 1)) * Fraction(
            math.factorial(n - k - 1), math.factorial(h - k - 1) * k
        )
        coeffs.append(c * 2**k)
    return Poly(coeffs)


def critical_potential_pochhammer(n: int) -> Poly:
    """Same polynomial as ``critical_potential`` from the Pochhammer series
    ``sum (k-1)! ((1-n)/2)_k / (1-n)_k (2 rho)^k / k!``."""
    if n % 2 == 0:
        raise DomainError("the critical potential needs n odd")
    a = Fraction(1 - n, 2)
    coeffs = [Fraction(0)]
    for k in range(1, (n - 1) // 2 + 1):
        c = pochhammer(a, k) / (pochhammer(Fraction(1 - n), k) * k)
        coeffs.append(c * 2**k)
    return Poly(coeffs)


def hyperbolic_radial_laplacian(S: Poly, n: int, log_coeff=0) -> Poly:
    """Hyperbolic Laplacian of ``S(rho) + c ln(rho)`` for radial functions.

    ``Delta_g u = rho^2 [(1-2 rho) u'' - (n+1) u'] - (n-1)(1-2 rho) rho u'``
    with derivatives in ``rho``; the log term is expanded by hand so the
    result stays polynomial.
    """
    rho = Poly.x()
    one_m = Poly([1, -2])
    d1, d2 = S.deriv(), S.deriv(2)
    out = rho * rho * (one_m * d2 - d1 * (n + 1)) - one_m * rho * d1 * (n - 1)
    if log_coeff:
        c = log_coeff
        # u' = c/rho, u'' = -c/rho^2
        out = out + one_m * (-c) - rho * ((n + 1) * c) - one_m * ((n - 1) * c)
    return out


def tau_laplacian_residual(n: int) -> Poly:
    """``-Delta_g tau - n`` for ``tau = S(rho) + ln(rho)``; the zero polynomial when correct."""
    S = critical_potential(n)
    return -hyperbolic_radial_laplacian(S, n, log_coeff=1) - n


@dataclass(frozen=True)
class AdaptedMetricFactor:
    """``rho -> psi_gamma(rho)`` (subcritical) or ``e^(2 S(rho))`` (critical)."""

    params: ModelParams
    evaluator: Callable
    kind: str  # "polynomial", "hypergeometric" or "critical"

    def __call__(self, rho):
        if not 0 < rho <= 0.5:
            raise UsageError(f"rho={rho} outside (0, 1/2]")
        return self.evaluator(rho)


def adapted_metric(params: ModelParams) -> AdaptedMetricFactor:
    n, g = params.n, params.gamma
    if params.is_critical:
        if n % 2 == 0:
            raise DomainError("critical adapted metric needs n odd")
        S = critical_potential(n)
        return AdaptedMetricFactor(params, lambda rho: math.exp(2 * float(S(rho))), "critical")
    if params.is_half_integer:
        P = psi_polynomial(n, params.m)
        return AdaptedMetricFactor(params, lambda rho: P(rho), "polynomial")
    gf = float(g)
    return AdaptedMetricFactor(params, lambda rho: psi_general(n, gf, float(rho)), "hypergeometric")


def adapted_metric_factor(params: ModelParams, rho):
    """``psi_gamma(rho)``, or the critical conformal factor ``e^(2 tau) rho^-2``."""
    return adapted_metric(params)(rho)


def conformal_factor(params: ModelParams, rho) -> float:
    """Factor ``F`` with ``g* = F |dx|^2``."""
    f = adapted_metric(params)
    if f.kind == "critical":
        return f(rho)
    psi = float(f(rho))
    return psi ** (4 / (params.n - 2 * float(params.gamma)))


def dimension_limit(m: int, rho: float, delta: float = 1e-6) -> float:
    """``lim_{n' -> 2m+1} psi_(m+1/2)(rho)^(4/(n'-2m-1))`` by a symmetric difference."""
    vals = []
    for d in (delta, -delta):
        dm1, _ = psi_real_dimension(2 * m + 1 + d, m, rho)
        vals.append(4 / d * math.log1p(dm1))
    return math.exp(0.5 * (vals[0] + vals[1]))

