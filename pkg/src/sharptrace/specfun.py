"""Floating-point special functions: Gauss hypergeometric 2F1 on [0, 1],
Gegenbauer polynomials and the Gauss quadrature rules used for every 1-D
integral in the package."""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, UnsupportedRegimeError, UsageError

__all__ = [
    "hyp2f1",
    "hyp2f1_series",
    "gegenbauer",
    "gegenbauer_all",
    "gegenbauer_norm_sq",
    "QuadratureRule",
    "quad_rule",
    "MAX_SERIES_TERMS",
    "SWITCH_POINT",
]

MAX_SERIES_TERMS = 20000
SWITCH_POINT = 0.5
_INT_TOL = 1e-12


def _nonpos_int(x: float) -> int | None:
    r = round(x)
    if abs(x - r) <= _INT_TOL * max(1.0, abs(x)) and r <= 0:
        return int(-r)
    return None


def _is_int(x: float) -> bool:
    return abs(x - round(x)) <= _INT_TOL * max(1.0, abs(x))


def hyp2f1_series(a: float, b: float, c: float, z: float, max_terms: int = MAX_SERIES_TERMS) -> float:
    """Direct Gauss series, summed with ``math.fsum``.

    Terminates early when ``a`` or ``b`` is a nonpositive integer.
    """
    return _series(a, b, c, z, max_terms)[0]


def _series(a, b, c, z, max_terms=MAX_SERIES_TERMS):
    """Series value and the sum of absolute values of its terms."""
    stop = None
    for x in (a, b):
        k = _nonpos_int(x)
        if k is not None:
            stop = k if stop is None else min(stop, k)
    c0 = _nonpos_int(c)
    if c0 is not None and (stop is None or stop > c0):
        raise DomainError(f"c={c} is a nonpositive integer")
    terms = [1.0]
    term = 1.0
    running = 1.0
    limit = max_terms if stop is None else stop
    small = 0
    for k in range(limit):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        terms.append(term)
        running += term
        if stop is None:
            # require two consecutive negligible terms before stopping
            small = small + 1 if abs(term) <= 1e-17 * abs(running) else 0
            if small >= 2:
                return math.fsum(terms), math.fsum(abs(t) for t in terms)
    if stop is None:
        raise ConvergenceError(f"2F1({a}, {b}; {c}; {z}) did not converge in {max_terms} terms")
    return math.fsum(terms), math.fsum(abs(t) for t in terms)


def _gauss_at_one(a, b, c) -> float:
    d = c - a - b
    return float(special.gamma(c) * special.gamma(d) * special.rgamma(c - a) * special.rgamma(c - b))


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric ``F(a, b; c; z)`` for ``z`` in [0, 1].

    Routes: terminating series anywhere; direct series for ``z <= 1/2``;
    Euler's transformation when it makes the series terminate; the
    connection formula through ``1 - z`` when ``c - a - b`` is not an integer.
    ``z = 1`` is accepted when ``c - a - b > 0`` (Gauss's value).
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if not 0.0 <= z <= 1.0:
        raise UsageError(f"z={z} outside [0, 1]")
    if _nonpos_int(c) is not None and _nonpos_int(a) is None and _nonpos_int(b) is None:
        raise DomainError(f"c={c} is a nonpositive integer")
    if z == 0.0:
        return 1.0
    d = c - a - b
    if _nonpos_int(a) is not None or _nonpos_int(b) is not None:
        return hyp2f1_series(a, b, c, z)
    if z == 1.0:
        if d <= 0:
            raise DomainError(f"F(a,b;c;1) diverges for c-a-b={d}")
        return _gauss_at_one(a, b, c)
    if z <= SWITCH_POINT:
        return hyp2f1_series(a, b, c, z)
    if _nonpos_int(c - a) is not None or _nonpos_int(c - b) is not None:
        return (1.0 - z) ** d * hyp2f1_series(c - a, c - b, c, z)
    if _is_int(d):
        raise UnsupportedRegimeError(
            f"F({a}, {b}; {c}; {z}): integer c-a-b={d} with z > 1/2 is the logarithmic case"
        )
    w = 1.0 - z
    g = special.gamma
    rg = special.rgamma
    t1 = float(g(c) * g(d) * rg(c - a) * rg(c - b))
    t2 = float(g(c) * g(-d) * rg(a) * rg(b))
    s1, m1 = _series(a, b, 1.0 - d, w) if t1 != 0 else (0.0, 0.0)
    s2, m2 = _series(c - a, c - b, 1.0 + d, w) if t2 != 0 else (0.0, 0.0)
    value = t1 * s1 + w**d * t2 * s2
    if value == 0.0:
        return 0.0
    cond = (abs(t1) * m1 + w**d * abs(t2) * m2) / abs(value)
    if cond > 1e2:
        # The connection formula cancels badly here; the direct series
        # still converges for z < 1 and is used when it is better conditioned.
        try:
            v2, m = _series(a, b, c, z)
        except ConvergenceError:
            return value
        if v2 != 0.0 and m / abs(v2) < cond:
            return v2
    return value


# --------------------------------------------------------------------------
# Gegenbauer


def gegenbauer(alpha: float, k: int, t):
    """``C_k^alpha(t)`` by the three-term recurrence."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return gegenbauer_all(alpha, k, t)[k]


def gegenbauer_all(alpha: float, K: int, t):
    """Array of ``C_0^alpha(t) .. C_K^alpha(t)``; first axis is the degree."""
    t = np.asarray(t, dtype=float)
    out = np.empty((K + 1,) + t.shape)
    out[0] = 1.0
    if K >= 1:
        out[1] = 2.0 * alpha * t
    for k in range(2, K + 1):
        out[k] = (2.0 * (k + alpha - 1) * t * out[k - 1] - (k + 2 * alpha - 2) * out[k - 2]) / k
    return out


def gegenbauer_norm_sq(alpha: float, k: int) -> float:
    """``int_{-1}^{1} (C_k^alpha)^2 (1-t^2)^(alpha-1/2) dt``."""
    lg = (
        math.log(math.pi)
        + (1 - 2 * alpha) * math.log(2)
        + math.lgamma(k + 2 * alpha)
        - math.lgamma(k + 1)
        - math.log(k + alpha)
        - 2 * math.lgamma(alpha)
    )
    return math.exp(lg)


# --------------------------------------------------------------------------
# Quadrature


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule ``sum w_i f(x_i)`` for one of three weighted domains.

    ``domain`` is ``"sphere"`` (``[-1, 1]`` with ``(1-t^2)^((n-2)/2)``),
    ``"interval01"`` (plain ``[0, 1]``) or ``"halfline"`` (``[0, inf)`` with
    ``y^alpha e^-y``).
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain: str
    order: int
    n: int | None = None
    alpha: float = 0.0
    mass: float = field(default=0.0, compare=False)

    def integrate(self, f) -> float:
        vals = np.asarray(f(self.nodes), dtype=float)
        return math.fsum((self.weights * vals).tolist())

    def integrate_values(self, vals) -> float:
        return math.fsum((self.weights * np.asarray(vals, dtype=float)).tolist())


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=64)
def quad_rule(domain: str, n: int | None = None, order: int = 200, alpha: float = 0.0) -> QuadratureRule:
    """Build a Gauss rule exact for polynomials of degree ``2*order - 1``.

    >>> r = quad_rule("interval01", order=10)
    >>> abs(r.integrate(lambda x: x**19) - 1/20) < 1e-15
    True
    """
    if order < 1:
        raise UsageError("quadrature order must be positive")
    if domain == "sphere":
        if n is None or n < 1:
            raise UsageError("sphere rule needs dimension n >= 1")
        e = (n - 2) / 2
        if e == 0:
            x, w = special.roots_legendre(order)
        else:
            x, w = special.roots_jacobi(order, e, e)
        mass = math.sqrt(math.pi) * math.exp(math.lgamma(n / 2) - math.lgamma((n + 1) / 2))
    elif domain == "interval01":
        x, w = special.roots_legendre(order)
        x, w = (x + 1) / 2, w / 2
        mass = 1.0
    elif domain == "halfline":
        if alpha <= -1:
            raise UsageError("halfline alpha must exceed -1")
        if alpha == 0:
            x, w = special.roots_laguerre(order)
        else:
            x, w = special.roots_genlaguerre(order, alpha)
        mass = math.gamma(alpha + 1)
    else:
        raise UsageError(f"unknown quadrature domain {domain!r}")
    keep = w > 0
    x, w = x[keep], w[keep]
    idx = np.argsort(x)
    x, w = x[idx], w[idx]
    total = math.fsum(w.tolist())
    if abs(total - mass) > 1e-12 * max(1.0, mass):
        raise ConvergenceError(f"{domain} rule of order {order}: mass {total} != {mass}")
    return QuadratureRule(_freeze(x), _freeze(w), domain, order, n, alpha, mass)
