"""Both sides of the sharp trace inequality on the ball and of the
Lebedev-Milin inequality at the critical order, for zonal boundary data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import AccuracyError, UsageError
from ..records import InequalityReport
from ..specfun import gegenbauer_all, quad_rule
from ..sphere import ModelParams, ZonalFunction, gjms_eigenvalue, sphere_volume, zonal_expand
from .energy import derive_boundary_symbol, printed_boundary_value, unit_mode_energy
from .profiles import HALF, boundary_constant

__all__ = [
    "Datum",
    "extremal",
    "log_extremal",
    "perturbed",
    "const",
    "custom",
    "extremal_exponent",
    "trace_inequality_report",
    "lebedev_milin_report",
    "lebedev_milin_constant",
    "lebedev_milin_constant_chain",
]

EXPONENT_CHOICES = ("beckner", "printed")


def extremal_exponent(n: int, gamma, choice: str = "beckner") -> float:
    """``(2 gamma - n)/2``; ``choice="printed"`` halves it once more."""
    if choice not in EXPONENT_CHOICES:
        raise UsageError(f"exponent choice must be one of {EXPONENT_CHOICES}")
    e = (2 * float(gamma) - n) / 2
    return e if choice == "beckner" else e / 2


@dataclass(frozen=True)
class Datum:
    """A zonal boundary datum ``t -> f(t)`` whose form may depend on the model.

    ``build(params)`` returns ``(pointwise function, exact coefficients or None)``.
    """

    kind: str
    spec: dict
    build: Callable = field(compare=False, repr=False)

    def describe(self) -> dict:
        return {"kind": self.kind, **self.spec}

    def expand(self, params: ModelParams, L: int = 40, order: int = 200) -> ZonalFunction:
        fn, coeffs = self.build(params)
        if coeffs is not None:
            padded = list(coeffs) + [0.0] * max(0, L + 1 - len(coeffs))
            return ZonalFunction(tuple(float(c) for c in padded), params.n, fn, 0.0, (), self.kind)
        return zonal_expand(fn, params.n, L, order, label=self.kind)


def extremal(x0: float, exponent_choice: str = "beckner") -> Datum:
    """``(1 - x0 t)^e`` with the Beckner exponent; ``-ln(1 - x0 t)`` at the critical order."""
    if not 0 <= x0 < 1:
        raise UsageError(f"|x0|={x0} outside [0, 1)")
    extremal_exponent(3, 0.5, exponent_choice)  # validates the choice

    def build(params):
        if params.is_critical:
            return (lambda t: -np.log1p(-x0 * np.asarray(t))), ([0.0] if x0 == 0 else None)
        e = extremal_exponent(params.n, params.gamma, exponent_choice)
        return (lambda t: (1 - x0 * np.asarray(t)) ** e), ([1.0] if x0 == 0 else None)

    return Datum("extremal", {"x0": x0, "exponent_choice": exponent_choice}, build)


def log_extremal(x0: float) -> Datum:
    """``-ln(1 - x0 t)``."""
    if not 0 <= x0 < 1:
        raise UsageError(f"|x0|={x0} outside [0, 1)")
    return Datum("log", {"x0": x0}, lambda params: ((lambda t: -np.log1p(-x0 * np.asarray(t))), None))


def const(value: float = 1.0) -> Datum:
    return Datum("const", {"value": value}, lambda params: ((lambda t: np.full(np.shape(t), float(value))), [value]))


def perturbed(base: Datum | None = None, amplitude: float = 0.1, mode: int = 2) -> Datum:
    """``base + amplitude * C_mode^((n-1)/2)(t)``; the default base is the constant 1."""
    base = const(1.0) if base is None else base
    if mode < 0:
        raise UsageError("perturbation degree must be nonnegative")

    def build(params):
        fn, coeffs = base.build(params)
        a = (params.n - 1) / 2

        def g(t):
            t = np.asarray(t, dtype=float)
            return fn(t) + amplitude * gegenbauer_all(a, mode, t)[mode]

        if coeffs is None:
            return g, None
        out = list(coeffs) + [0.0] * max(0, mode + 1 - len(coeffs))
        out[mode] += amplitude
        return g, out

    return Datum("perturbed", {"base": base.describe(), "amplitude": amplitude, "mode": mode}, build)


def custom(z: ZonalFunction) -> Datum:
    return Datum("custom", {"label": z.label, "L": z.L}, lambda params: (z.pointwise, list(z.coeffs)))


def _tail_fraction(a2: list[float], width: int = 5) -> float:
    total = math.fsum(a2)
    if total == 0:
        return 0.0
    return math.fsum(a2[-width:]) / total


def _expand_checked(datum: Datum, params: ModelParams, L: int, order: int, tail_tol: float):
    z = datum.expand(params, L, order)
    a2 = z.mode_norms_sq()
    tail = _tail_fraction(a2)
    if z.warnings or tail > tail_tol:
        msg = "; ".join(z.warnings) or f"tail fraction {tail:.3e} above {tail_tol:.1e}"
        raise AccuracyError(f"zonal expansion of {datum.kind} datum not resolved at L={L}: {msg}")
    quad = {"L": L, "order": order, "tail_fraction": tail, "reconstruction_error": z.reconstruction_error}
    return z, a2, quad


def _mean_integral(values: np.ndarray, rule) -> float:
    """``(1/omega_n) int_S^n values`` as a ratio of quadrature sums."""
    return rule.integrate_values(values) / rule.integrate_values(np.ones_like(values))


def trace_inequality_report(
    params: ModelParams,
    datum: Datum,
    L: int = 40,
    order: int = 200,
    tail_tol: float = 1e-10,
    extra_energy=0,
) -> InequalityReport:
    """RHS = energy of the canonical extension + derived boundary form;
    LHS = sharp constant times ``(int |f|^q)^(2/q)``, ``q = 2n/(n-2m-1)``.

    ``extra_energy`` adds the energy of an interior perturbation vanishing
    to order ``m+1`` on the boundary, which leaves the boundary data fixed.
    """
    if not params.is_subcritical_half_integer:
        raise UsageError(f"trace inequality needs gamma = m + 1/2 with 2m+1 < n, got {params.describe()}")
    n, m = params.n, params.m
    z, a2, quad = _expand_checked(datum, params, L, order, tail_tol)
    t_sym = derive_boundary_symbol(params)
    c = boundary_constant(m)
    top = m + HALF
    e = [float(unit_mode_energy(params, l)) for l in range(z.L + 1)]
    t = [float(t_sym(l)) for l in range(z.L + 1)]
    T = [float(printed_boundary_value(n, m, l)) for l in range(z.L + 1)]
    p = [float(c * gjms_eigenvalue(n, top, l)) for l in range(z.L + 1)]

    energy = math.fsum(x * y for x, y in zip(e, a2))
    boundary = math.fsum(x * y for x, y in zip(t, a2))
    breakdown = {"energy": energy, "boundary": boundary}
    if extra_energy:
        breakdown["interior_perturbation"] = float(extra_energy)
    rhs = math.fsum(breakdown.values())

    q = 2 * n / (n - 2 * m - 1)
    rule = quad_rule("sphere", n, order)
    fv = np.abs(np.asarray(z.pointwise(rule.nodes), dtype=float))
    integral = sphere_volume(n - 1) * rule.integrate_values(fv**q)
    sharp = float(c * gjms_eigenvalue(n, top, 0)) * sphere_volume(n) ** ((2 * m + 1) / n)
    lhs = sharp * integral ** ((n - 2 * m - 1) / n)

    printed_boundary = math.fsum(x * y for x, y in zip(T, a2))
    extras = {
        "beckner_form": math.fsum(x * y for x, y in zip(p, a2)),
        "boundary_printed": printed_boundary,
        "rhs_printed": energy + printed_boundary,
        "ratio_printed": (energy + printed_boundary) / lhs if lhs else math.nan,
        "exponent": extremal_exponent(n, params.gamma, datum.spec.get("exponent_choice", "beckner"))
        if datum.kind == "extremal"
        else None,
        "modes": [{"l": l, "a2": a2[l], "e": e[l], "t": t[l]} for l in range(z.L + 1) if a2[l] != 0.0],
    }
    return InequalityReport("trace", lhs, rhs, sharp, breakdown, params.describe(), datum.describe(), quad, extras)


def lebedev_milin_constant(n: int) -> float:
    """``n / (2^(n+1) pi^((n+1)/2) Gamma((n+1)/2))``."""
    return n / (2 ** (n + 1) * math.pi ** ((n + 1) / 2) * math.gamma((n + 1) / 2))


def lebedev_milin_constant_chain(n: int) -> float:
    """``n / (2 (n-1)! omega_n) * Gamma(n/2) / (Gamma((n+1)/2) sqrt(pi))``.

    Beckner's exponential inequality with the GJMS form rewritten through
    ``energy + boundary = c_m * <f, P_n f>`` at ``m = (n-1)/2``.
    """
    return n / (2 * math.factorial(n - 1) * sphere_volume(n)) * math.gamma(n / 2) / (math.gamma((n + 1) / 2) * math.sqrt(math.pi))


def lebedev_milin_report(params: ModelParams, datum: Datum, L: int = 40, order: int = 200, tail_tol: float = 1e-10) -> InequalityReport:
    """LHS = ``ln((1/omega_n) int e^(n(f - fbar)))``; RHS = constant * (energy + boundary)."""
    n = params.n
    if n % 2 == 0 or not params.is_critical:
        raise UsageError(f"Lebedev-Milin needs n odd and gamma = n/2, got {params.describe()}")
    z, a2, quad = _expand_checked(datum, params, L, order, tail_tol)
    t_sym = derive_boundary_symbol(params)
    e = [float(unit_mode_energy(params, l)) for l in range(z.L + 1)]
    t = [float(t_sym(l)) for l in range(z.L + 1)]
    K = lebedev_milin_constant(n)
    energy = K * math.fsum(x * y for x, y in zip(e, a2))
    boundary = K * math.fsum(x * y for x, y in zip(t, a2))
    breakdown = {"energy": energy, "boundary": boundary}
    rhs = energy + boundary

    rule = quad_rule("sphere", n, order)
    fbar = z.coeffs[0]
    fv = np.asarray(z.pointwise(rule.nodes), dtype=float)
    lhs = math.log(_mean_integral(np.exp(n * (fv - fbar)), rule))

    K_chain = lebedev_milin_constant_chain(n)
    extras = {
        "constant_formula": K,
        "constant_chain": K_chain,
        "constant_relative_gap": abs(K - K_chain) / K,
        "mean": fbar,
    }
    if n == 3:
        printed = 3 / (16 * math.pi**3)
        extras["constant_two_sphere_printed"] = printed
        extras["rhs_with_two_sphere_printed"] = rhs * printed / K
    return InequalityReport("lebedev-milin", lhs, rhs, K, breakdown, params.describe(), datum.describe(), quad, extras)
