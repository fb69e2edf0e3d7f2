"""Extension of zonal boundary data into the ball: the Poisson kernel
integral and the mode series, the two-branch expansion near the boundary
and the Funk-Hecke eigenvalues of the kernel."""

from __future__ import annotations

import math

import numpy as np

from ..errors import AccuracyError, UnsupportedRegimeError, UsageError
from ..specfun import gegenbauer_all, hyp2f1, quad_rule
from ..sphere import ModelParams, ZonalFunction, funk_hecke_lambda, sphere_volume, zonal_expand
from .metric import inverse_d_gamma
from .profiles import PhiFunction, phi_profile

__all__ = [
    "KERNEL_RADIUS_LIMIT",
    "kernel_prefactor",
    "poisson_extend",
    "series_extend",
    "split_asymptotics",
    "funk_hecke_kernel_lambda",
    "funk_hecke_scale",
    "funk_hecke_series_form",
    "funk_hecke_phi_form",
]

KERNEL_RADIUS_LIMIT = 0.9


def kernel_prefactor(n: int, gamma: float) -> float:
    """``pi^(-n/2) Gamma(n/2 + gamma) / Gamma(gamma)``."""
    return math.exp(-n / 2 * math.log(math.pi) + math.lgamma(n / 2 + gamma) - math.lgamma(gamma))


def _pointwise(f):
    if isinstance(f, ZonalFunction):
        return f.pointwise
    return f


def _kernel_value(f, r: float, t0: float, params: ModelParams, order: int) -> float:
    n, g = params.n, float(params.gamma)
    s = n / 2 + g
    rho = (1 - r * r) / 2
    rt = quad_rule("sphere", n, order)
    ru = quad_rule("sphere", n - 1, order)
    t = rt.nodes[:, None]
    u = ru.nodes[None, :]
    arg = t * t0 + np.sqrt(1 - t * t) * math.sqrt(max(0.0, 1 - t0 * t0)) * u
    fv = np.asarray(_pointwise(f)(np.clip(arg, -1.0, 1.0)), dtype=float)
    inner = fv @ ru.weights
    kern = (rho / (1 - 2 * r * rt.nodes + r * r)) ** s
    total = math.fsum(rt.weights * kern * inner)
    return kernel_prefactor(n, g) * sphere_volume(n - 2) * total


def poisson_extend(f, r: float, t0: float, params: ModelParams, order: int = 200, tol: float = 1e-10) -> float:
    """Kernel-path solution at the point ``x = r * xhat`` with ``<xhat, e> = t0``.

    Integrates ``pi^(-n/2) Gamma(n/2+gamma)/Gamma(gamma) (rho/|x - xi|^2)^s f(xi)``
    over the sphere as a product Gauss rule in ``t = <xhat, xi>`` and the
    remaining polar angle. Orders ``Q`` and ``1.5 Q`` must agree to ``tol``.
    """
    if not 0 <= r < 1:
        raise UsageError(f"|x|={r} outside [0, 1)")
    if not -1 <= t0 <= 1:
        raise UsageError(f"t0={t0} outside [-1, 1]")
    if r > KERNEL_RADIUS_LIMIT:
        raise AccuracyError(f"kernel path limited to |x| <= {KERNEL_RADIUS_LIMIT}; use series_extend")
    v1 = _kernel_value(f, r, t0, params, order)
    v2 = _kernel_value(f, r, t0, params, (3 * order) // 2)
    if abs(v1 - v2) > tol * max(1.0, abs(v2)):
        raise AccuracyError(f"kernel quadrature unresolved at |x|={r}: orders {order} and {(3 * order) // 2} differ by {abs(v1 - v2):.3e}")
    return v2


def _mode_values(params: ModelParams, r: float, L: int) -> list[float]:
    """``phi_l(r^2) r^l`` for ``l = 0..L``."""
    out = []
    for l in range(L + 1):
        p = phi_profile(params, l)
        if isinstance(p, PhiFunction):
            out.append(p.mode(r))
        else:
            out.append(float(p(r)))
    return out


def series_extend(f, r: float, t0: float, params: ModelParams, L: int = 40) -> float:
    """Mode-series solution ``rho^(n-s) sum_l phi_l(r^2) r^l f_l C_l(t0)``."""
    if not 0 <= r < 1:
        raise UsageError(f"|x|={r} outside [0, 1)")
    z = f if isinstance(f, ZonalFunction) else zonal_expand(f, params.n, L)
    n = params.n
    s = n / 2 + float(params.gamma)
    rho = (1 - r * r) / 2
    C = gegenbauer_all((n - 1) / 2, z.L, np.asarray(t0, dtype=float))
    modes = _mode_values(params, r, z.L)
    terms = [z.coeffs[l] * modes[l] * float(C[l]) for l in range(z.L + 1)]
    return rho ** (n - s) * math.fsum(terms)


def split_asymptotics(params: ModelParams, l: int, rho: float) -> tuple[float, float]:
    """``(F_part, H_part)`` with ``phi_l(1 - 2 rho) = F_part + rho^(2 gamma) H_part``.

    ``F_part = F(l + n/2 - gamma, 1/2 - gamma; 1 - 2 gamma; 2 rho)`` and
    ``H_part = (1/d_gamma) Gamma(l+n/2+gamma)/Gamma(l+n/2-gamma)
    F(1/2 + gamma, l + n/2 + gamma; 1 + 2 gamma; 2 rho)``.
    """
    g = float(params.gamma)
    if float(2 * g).is_integer():
        raise UnsupportedRegimeError("2*gamma is an integer; the expansion carries logarithms")
    if not 0 <= rho <= 0.5:
        raise UsageError(f"rho={rho} outside [0, 1/2]")
    n = params.n
    z = 2 * rho
    F = hyp2f1(l + n / 2 - g, 0.5 - g, 1 - 2 * g, z)
    ratio = math.gamma(l + n / 2 + g) / math.gamma(l + n / 2 - g)
    H = inverse_d_gamma(g) * ratio * hyp2f1(0.5 + g, l + n / 2 + g, 1 + 2 * g, z)
    return F, H


def funk_hecke_kernel_lambda(params: ModelParams, l: int, r: float, order: int = 200) -> float:
    """Quadrature eigenvalue of the zonal kernel ``(1 - 2 r t + r^2)^(-s)``."""
    s = params.n / 2 + float(params.gamma)
    return funk_hecke_lambda(lambda t: (1 - 2 * r * t + r * r) ** (-s), l, params.n, order)


def funk_hecke_scale(params: ModelParams, l: int, r: float, order: int = 200) -> float:
    """Eigenvalue of ``|K C_l|`` in place of ``K C_l``: the rounding floor of the quadrature.

    For small ``r`` and large ``l`` the eigenvalue is ``O(r^l)`` while the
    integrand is ``O(1)``, so accuracy is measured against this scale.
    """
    n = params.n
    s = n / 2 + float(params.gamma)
    rule = quad_rule("sphere", n, order)
    t = rule.nodes
    C = gegenbauer_all((n - 1) / 2, l, t)[l]
    integral = rule.integrate_values(np.abs((1 - 2 * r * t + r * r) ** (-s) * C))
    logpre = (n - 1) / 2 * math.log(4 * math.pi) + math.lgamma(l + 1) + math.lgamma((n - 1) / 2) - math.lgamma(l + n - 1)
    return math.exp(logpre) * integral


def _fh_constant(n: int) -> float:
    # (4 pi)^((n-1)/2) Gamma((n-1)/2) Gamma(n/2) Gamma(1/2) / Gamma(n-1)
    return math.exp(
        (n - 1) / 2 * math.log(4 * math.pi)
        + math.lgamma((n - 1) / 2)
        + math.lgamma(n / 2)
        + 0.5 * math.log(math.pi)
        - math.lgamma(n - 1)
    )


def funk_hecke_series_form(params: ModelParams, l: int, r: float) -> float:
    """Closed form through ``F(gamma + 1/2, n/2 + l + gamma; l + (n+1)/2; r^2) r^l``."""
    n, g = params.n, float(params.gamma)
    lg = math.lgamma(n / 2 + g + l) - math.lgamma(n / 2 + g) - math.lgamma((n + 1) / 2 + l)
    return _fh_constant(n) * math.exp(lg) * hyp2f1(g + 0.5, n / 2 + l + g, l + (n + 1) / 2, r * r) * r**l


def funk_hecke_phi_form(params: ModelParams, l: int, r: float) -> float:
    """Closed form ``2^(-2 gamma) K_n Gamma(2 gamma)/(Gamma(gamma+1/2) Gamma(n/2+gamma)) rho^(-2 gamma) phi_l(r^2) r^l``."""
    n, g = params.n, float(params.gamma)
    rho = (1 - r * r) / 2
    lg = math.lgamma(2 * g) - math.lgamma(g + 0.5) - math.lgamma(n / 2 + g)
    mode = _mode_values(params, r, l)[l]
    return 2 ** (-2 * g) * _fh_constant(n) * math.exp(lg) * rho ** (-2 * g) * mode
