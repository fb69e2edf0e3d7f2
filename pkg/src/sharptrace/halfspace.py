"""Half-space model: the kernel differentiation identity, per-frequency
profiles of the canonical extension ``U_m`` and its iterated Laplacians,
boundary traces, the energy multiplier and a Gaussian trace report.

On a single Fourier mode ``e^(i x.xi)`` with ``kappa = |xi|`` every profile
is ``kappa^P * sum_j c_j s^j e^(-s)`` with ``s = kappa y``, so each identity
becomes an equality between rational coefficient lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .exactmath import Poly, gamma_ratio
from .records import InequalityReport
from .specfun import quad_rule
from .sphere import sphere_volume

__all__ = [
    "KernelTerm",
    "apply_y_derivative",
    "kernel_operator",
    "kernel_identity_check",
    "FreqProfile",
    "freq_profile",
    "apply_wave",
    "HalfspaceTraces",
    "halfspace_boundary_traces",
    "energy_multiplier",
    "profile_energy",
    "profile_energy_at",
    "halfspace_trace_report",
]

HALF = Fraction(1, 2)
N = Poly.x()  # the dimension n as a formal variable


# ---------------------------------------------------------------------------
# kernel algebra


@dataclass(frozen=True)
class KernelTerm:
    """``coefficient(n) * y^a / (|x|^2 + y^2)^b`` with ``b = (n+1)/2 + shift``."""

    coefficient: Poly
    a: int
    shift: int

    def b(self, n=None):
        return Fraction(n + 1, 2) + self.shift if n is not None else f"(n+1)/2+{self.shift}"

    def evaluate(self, n: int, x2: float, y: float) -> float:
        return float(self.coefficient(n)) * y**self.a / (x2 + y * y) ** float(self.b(n))

    def __str__(self) -> str:
        return f"({self.coefficient}) y^{self.a} / R^((n+1)/2+{self.shift})"


def _collect(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if not v.is_zero()}


def _add(acc: dict, key, coef: Poly) -> None:
    acc[key] = acc[key] + coef if key in acc else coef


def apply_y_derivative(terms: dict) -> dict:
    """``d/dy`` on ``{(a, shift): coef}``.

    ``d/dy [y^a R^-b] = a y^(a-1) R^-b - 2 b y^(a+1) R^-(b+1)``, ``2b = n + 1 + 2 shift``.
    """
    out: dict = {}
    for (a, j), c in terms.items():
        if a:
            _add(out, (a - 1, j), c * a)
        two_b = N + (1 + 2 * j)
        _add(out, (a + 1, j + 1), -(c * two_b))
    return _collect(out)


def kernel_operator(m: int) -> dict:
    """``sum_k 2^k/k! (2m-k)!/(m-k)! (-y)^k d^k/dy^k`` applied to ``y / R^((n+1)/2)``."""
    if m < 0:
        raise UsageError("m must be nonnegative")
    current = {(1, 0): Poly.const(1)}
    out: dict = {}
    for k in range(m + 1):
        w = Fraction(2**k * math.factorial(2 * m - k), math.factorial(k) * math.factorial(m - k)) * (-1) ** k
        for (a, j), c in current.items():
            _add(out, (a + k, j), c * w)
        current = apply_y_derivative(current)
    return _collect(out)


def kernel_identity_check(m: int, n: int | None = None) -> list[KernelTerm]:
    """Residual of the kernel identity; empty when it holds.

    Target: ``4^m ((n+1)/2)_m y^(1+2m) / R^((n+1)/2 + m)``. With ``n`` given,
    coefficients are evaluated at that dimension; otherwise they stay
    polynomials in ``n``.
    """
    lhs = kernel_operator(m)
    target = Poly.const(1)
    for i in range(m):
        target = target * (N * HALF + (HALF + i))
    _add(lhs, (1 + 2 * m, m), -(target * 4**m))
    res = _collect(lhs)
    if n is not None:
        res = {k: Poly.const(v(n)) for k, v in res.items()}
        res = _collect(res)
    return [KernelTerm(c, a, j) for (a, j), c in sorted(res.items())]


# ---------------------------------------------------------------------------
# frequency profiles


@dataclass(frozen=True)
class FreqProfile:
    """``kappa^kappa_power * sum_j coeffs[j] s^j e^(-s)``, ``s = kappa y``."""

    coeffs: tuple
    kappa_power: int

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def value_at_zero(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def dy(self) -> "FreqProfile":
        """``d/dy``: ``kappa (j s^(j-1) - s^j)`` on each term."""
        c = list(self.coeffs) + [Fraction(0)]
        out = [Fraction(0)] * len(c)
        for j, v in enumerate(self.coeffs):
            if j:
                out[j - 1] += j * v
            out[j] -= v
        return FreqProfile(_trim(out), self.kappa_power + 1)

    def dy_k(self, k: int) -> "FreqProfile":
        p = self
        for _ in range(k):
            p = p.dy()
        return p

    def __call__(self, kappa: float, y):
        s = kappa * np.asarray(y, dtype=float)
        poly = np.polynomial.polynomial.polyval(s, [float(c) for c in self.coeffs]) if self.coeffs else 0.0 * s
        return kappa**self.kappa_power * poly * np.exp(-s)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreqProfile):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return _trim(self.coeffs) == _trim(other.coeffs) and self.kappa_power == other.kappa_power

    def __hash__(self):
        return hash((_trim(self.coeffs), self.kappa_power))


def _trim(c) -> tuple:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(Fraction(x) for x in c)


def freq_profile(m: int, k: int) -> FreqProfile:
    """Closed form of ``Delta^k U_m`` on one frequency.

    ``(-1)^k 4^k m!^2 / ((m-k)! (2m)!) sum_j 2^j/j! (2m-2k-j)!/(m-k-j)! s^j``
    times ``kappa^(2k) e^(-s)``; the square-root-of-pi factors cancel.
    """
    if m < 0 or not 0 <= k <= m + 1:
        raise UsageError(f"need 0 <= k <= m+1, got m={m}, k={k}")
    if k == m + 1:
        return FreqProfile((), 2 * k)
    f = math.factorial
    pref = Fraction((-1) ** k * 4**k * f(m) ** 2, f(m - k) * f(2 * m))
    coeffs = [pref * Fraction(2**j * f(2 * m - 2 * k - j), f(j) * f(m - k - j)) for j in range(m - k + 1)]
    return FreqProfile(_trim(coeffs), 2 * k)


def apply_wave(p: FreqProfile) -> FreqProfile:
    """``d^2/dy^2 - kappa^2`` on one frequency: ``s^j e^-s -> kappa^2 (j(j-1) s^(j-2) - 2 j s^(j-1)) e^-s``."""
    out = [Fraction(0)] * max(len(p.coeffs), 1)
    for j, c in enumerate(p.coeffs):
        if j >= 2:
            out[j - 2] += j * (j - 1) * c
        if j >= 1:
            out[j - 1] -= 2 * j * c
    return FreqProfile(_trim(out), p.kappa_power + 2)


# ---------------------------------------------------------------------------
# boundary traces


def _trace_value_closed(m: int, k: int) -> Fraction:
    # m! Gamma(m-k+1/2) / ((m-k)! Gamma(m+1/2)) times (-kappa^2)^k
    return gamma_ratio(m - k + HALF, m + HALF).rational() * Fraction(math.factorial(m), math.factorial(m - k)) * (-1) ** k


def _trace_value_printed(m: int, k: int) -> Fraction:
    # same with Gamma(m-k-1) in the denominator; a pole there gives 0
    if m - k - 1 <= 0:
        return Fraction(0)
    return gamma_ratio(m - k + HALF, m + HALF).rational() * Fraction(math.factorial(m), math.factorial(m - k - 2)) * (-1) ** k


def _pure_even_closed(m: int, k: int) -> Fraction:
    # Gamma(k+1/2) Gamma(m-k+1/2) / (Gamma(1/2) Gamma(m+1/2)) times (-kappa^2)^k
    return gamma_ratio(k + HALF, HALF).rational() * gamma_ratio(m - k + HALF, m + HALF).rational() * (-1) ** k


@dataclass(frozen=True)
class HalfspaceTraces:
    """Boundary traces of ``U_m`` as rational multipliers of a power of kappa.

    Each list is indexed by ``k``; ``*_closed`` are the stated closed forms,
    ``*_printed`` the forms as typeset where those differ.
    """

    m: int
    values: list
    values_closed: list
    values_printed: list
    normals: list  # d_y Delta^k U at 0, k = 0..m
    top_normal_closed: Fraction
    top_normal_printed: Fraction
    pure_even: list  # d_y^(2k) U at 0, k = 0..m
    pure_even_closed: list
    pure_odd: list  # d_y^(2k+1) U at 0, k = 0..m-1

    @property
    def residuals(self) -> dict:
        m = self.m
        return {
            "values": [a - b for a, b in zip(self.values, self.values_closed)],
            "lower_normals": list(self.normals[:m]),
            "top_normal": self.normals[m] - self.top_normal_closed,
            "pure_even": [a - b for a, b in zip(self.pure_even, self.pure_even_closed)],
            "pure_odd": list(self.pure_odd),
        }

    @property
    def printed_residuals(self) -> dict:
        return {
            "values": [a - b for a, b in zip(self.values, self.values_printed)],
            "top_normal": self.normals[self.m] - self.top_normal_printed,
        }

    @property
    def ok(self) -> bool:
        r = self.residuals
        flat = r["values"] + r["lower_normals"] + [r["top_normal"]] + r["pure_even"] + r["pure_odd"]
        return all(x == 0 for x in flat)


def halfspace_boundary_traces(m: int) -> HalfspaceTraces:
    if m < 0:
        raise UsageError("m must be nonnegative")
    profiles = [freq_profile(m, k) for k in range(m + 1)]
    values = [p.value_at_zero() for p in profiles]
    normals = [p.dy().value_at_zero() for p in profiles]
    c = gamma_ratio(HALF, m + HALF).rational() * math.factorial(m)
    U = profiles[0]
    pure_even = [U.dy_k(2 * k).value_at_zero() for k in range(m + 1)]
    pure_odd = [U.dy_k(2 * k + 1).value_at_zero() for k in range(m)]
    return HalfspaceTraces(
        m=m,
        values=values,
        values_closed=[_trace_value_closed(m, k) for k in range(m + 1)],
        values_printed=[_trace_value_printed(m, k) for k in range(m + 1)],
        normals=normals,
        top_normal_closed=(-1) ** (m + 1) * c,
        top_normal_printed=(-1) ** m * c,
        pure_even=pure_even,
        pure_even_closed=[_pure_even_closed(m, k) for k in range(m + 1)],
        pure_odd=pure_odd,
    )


# ---------------------------------------------------------------------------
# energy


def _square_integral(p: FreqProfile) -> tuple[Fraction, int]:
    """``int_0^inf p(y)^2 dy`` as ``(coefficient, kappa power)``.

    Uses ``int_0^inf s^a e^(-2s) dy = a! / (2^(a+1) kappa)``.
    """
    total = Fraction(0)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(p.coeffs):
            total += a * b * Fraction(math.factorial(i + j), 2 ** (i + j + 1))
    return total, 2 * p.kappa_power - 1


def profile_energy(m: int) -> tuple[Fraction, int]:
    """Per-frequency ``int_0^inf |nabla^(m+1) U_m|^2 dy`` as ``(coefficient, kappa power)``."""
    if m % 2 == 1:
        return _square_integral(freq_profile(m, (m + 1) // 2))
    g = freq_profile(m, m // 2)
    a, pa = _square_integral(g.dy())
    b, pb = _square_integral(g)
    # kappa^2 |g|^2 from the tangential gradient
    assert pa == pb + 2
    return a + b, pa


def profile_energy_at(m: int, kappa: Fraction) -> Fraction:
    """The same energy at a concrete rational ``kappa``, integrated in ``y``.

    Expands the profile as ``sum_j d_j y^j e^(-kappa y)`` and uses
    ``int y^a e^(-2 kappa y) dy = a! / (2 kappa)^(a+1)``.
    """
    kappa = Fraction(kappa)

    def in_y(p: FreqProfile) -> list:
        return [c * kappa ** (j + p.kappa_power) for j, c in enumerate(p.coeffs)]

    def sq(d: list) -> Fraction:
        return sum(
            (d[i] * d[j] * Fraction(math.factorial(i + j)) / (2 * kappa) ** (i + j + 1) for i in range(len(d)) for j in range(len(d))),
            Fraction(0),
        )

    if m % 2 == 1:
        return sq(in_y(freq_profile(m, (m + 1) // 2)))
    g = freq_profile(m, m // 2)
    return sq(in_y(g.dy())) + kappa**2 * sq(in_y(g))


def energy_multiplier(m: int, kappas=(Fraction(1, 3), Fraction(1), Fraction(5, 2))) -> tuple[Fraction, int]:
    """``(c_m, 2m+1)`` with per-frequency energy ``c_m kappa^(2m+1)``.

    The structural computation is confirmed at each rational ``kappa`` in
    ``kappas``; a mismatch raises ``ArithmeticError``.
    """
    if m < 0:
        raise UsageError("m must be nonnegative")
    c, p = profile_energy(m)
    if p != 2 * m + 1:
        raise ArithmeticError(f"energy scales as kappa^{p}, expected kappa^{2 * m + 1}")
    for k in kappas:
        if profile_energy_at(m, k) != c * Fraction(k) ** p:
            raise ArithmeticError(f"energy at kappa={k} is not c_m kappa^{p}")
    return c, p


# ---------------------------------------------------------------------------
# Gaussian report


def _gaussian_rhs_closed(n: int, m: int, sigma: float) -> float:
    c = float(gamma_ratio(HALF, m + HALF).rational() * math.factorial(m))
    g = m + 0.5
    return c * math.pi ** (n / 2) * math.exp(math.lgamma(n / 2 + g) - math.lgamma(n / 2)) * sigma ** (n - 2 * g)


def _gaussian_lhs_closed(n: int, m: int, sigma: float) -> tuple[float, float]:
    c = float(gamma_ratio(HALF, m + HALF).rational() * math.factorial(m))
    g = m + 0.5
    p = 2 * n / (n - 2 * g)
    sharp = c * math.exp(math.lgamma((n + 2 * g) / 2) - math.lgamma((n - 2 * g) / 2)) * sphere_volume(n) ** (2 * g / n)
    return sharp * (2 * math.pi * sigma**2 / p) ** ((n - 2 * g) / 2), sharp


def _gaussian_rhs_quadrature(n: int, m: int, sigma: float, order: int) -> float:
    """Energy from numerically integrated profiles over ``y`` and ``|xi|``.

    ``|f^|^2 = (2 pi sigma^2)^n e^(-sigma^2 k^2)``; Plancherel contributes
    ``(2 pi)^-n``. The ``y`` integral per frequency uses Gauss-Laguerre in
    ``2 k y``; the radial frequency integral uses generalized Laguerre in
    ``sigma^2 k^2``, whose weight carries ``k^(n + 2m)``.
    """
    lag = quad_rule("halfline", 0, order)
    alpha = (n - 1) / 2 + m
    gl = quad_rule("halfline", 0, order, alpha=alpha)
    if m % 2 == 1:
        parts = [(freq_profile(m, (m + 1) // 2), 0)]
    else:
        g = freq_profile(m, m // 2)
        parts = [(g.dy(), 0), (g, 2)]

    def density(k: float) -> float:
        # int_0^inf energy density dy, with y = t / (2k); exp(-2s) is the Laguerre weight
        y = lag.nodes / (2 * k)
        total = 0.0
        for p, extra in parts:
            v = p(k, y) * np.exp(k * y)  # strip e^(-s) once; the weight supplies e^(-2s)
            total += k**extra * lag.integrate_values(v * v)
        return total / (2 * k)

    u = gl.nodes
    ks = np.sqrt(u) / sigma
    vals = np.array([density(k) / k ** (2 * m + 1) for k in ks])
    # k^(n-1) dk = u^((n-2)/2) du / (2 sigma^n); k^(2m+1) = u^(m+1/2) / sigma^(2m+1)
    radial = gl.integrate_values(vals) / (2 * sigma ** (n + 2 * m + 1))
    return (2 * math.pi) ** (-n) * (2 * math.pi * sigma**2) ** n * sphere_volume(n - 1) * radial


def _gaussian_norm_quadrature(n: int, m: int, sigma: float, order: int) -> float:
    g = m + 0.5
    p = 2 * n / (n - 2 * g)
    gl = quad_rule("halfline", 0, order, alpha=n / 2 - 1)
    # int e^(-p r^2/(2 sigma^2)) r^(n-1) dr with u = p r^2 / (2 sigma^2)
    scale = (2 * sigma**2 / p) ** (n / 2) / 2
    integral = sphere_volume(n - 1) * scale * gl.integrate_values(np.ones_like(gl.nodes))
    return integral ** ((n - 2 * g) / n)


def halfspace_trace_report(n: int, m: int, sigma: float = 1.0, order: int = 80) -> InequalityReport:
    """Gaussian ``f = exp(-|x|^2 / (2 sigma^2))``; both sides in closed form.

    Quadrature cross-checks of both sides are placed in ``extras``.
    """
    if m < 0 or not 2 * m + 1 < n:
        raise UsageError(f"need 2m+1 < n, got n={n}, m={m}")
    if not sigma > 0:
        raise UsageError("sigma must be positive")
    rhs = _gaussian_rhs_closed(n, m, sigma)
    lhs, sharp = _gaussian_lhs_closed(n, m, sigma)
    rhs_q = _gaussian_rhs_quadrature(n, m, sigma, order)
    lhs_q = sharp * _gaussian_norm_quadrature(n, m, sigma, order)
    c, _ = energy_multiplier(m)
    extras = {
        "rhs_quadrature": rhs_q,
        "lhs_quadrature": lhs_q,
        "rhs_quadrature_rel_err": abs(rhs_q - rhs) / abs(rhs),
        "lhs_quadrature_rel_err": abs(lhs_q - lhs) / abs(lhs),
        "energy_multiplier": str(c),
    }
    return InequalityReport(
        "halfspace",
        lhs,
        rhs,
        sharp,
        {"energy": rhs},
        {"n": n, "m": m, "gamma": str(m + HALF)},
        {"kind": "gaussian", "sigma": sigma},
        {"order": order},
        extras,
    )
