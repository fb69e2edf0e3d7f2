"""Verification suites: grids of independent cells, each producing checks."""

from __future__ import annotations

import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .. import __version__
from ..errors import SharpTraceError, UsageError
from ..exactmath import Poly, pochhammer
from .report import Check, Report, exact_check, numeric_check

SUITES = ("specfun", "ball", "halfspace", "inequality", "all")
MODES = ("all", "exact", "numeric")

# Every check carries one of these identifiers; the README coverage table
# lists the same keys.
PAPER_REFS = {
    "specfun.hyp2f1-closed-forms": "2F1 against elementary closed forms",
    "specfun.hyp2f1-transformations": "2F1 Euler transformation, contiguous relation, Gauss sum",
    "specfun.gegenbauer-orthogonality": "Gegenbauer Gram matrix under the sphere weight",
    "specfun.quadrature-mass": "quadrature rules reproduce their weight's mass",
    "ball.polyharmonic": "Delta^(m+1) of the canonical mode vanishes",
    "ball.laplacian-closed-form": "iterated mode Laplacian equals its hypergeometric closed form",
    "ball.profile-normalization": "phi_l(1) = 1",
    "ball.profile-derivatives": "derivatives of phi_l at the boundary",
    "ball.dirichlet-traces": "boundary values and normal derivatives of Delta^k V_m",
    "ball.second-normal": "second normal derivative closed form",
    "ball.mode-eigen": "rho^(n-s) phi_l(r^2) r^l solves the hyperbolic eigen equation",
    "ball.energy-identity": "energy + derived boundary symbol = c_m P_(2m+1)",
    "ball.two-sphere-form": "m = 1 boundary form 2 l(l+n-1) + (n+1)(n-3)/2",
    "ball.green-first-step": "first Green reduction with both boundary terms",
    "ball.printed-boundary-operator": "boundary operator with first coefficient (n-1)/2 as printed",
    "ball.corrected-boundary-operator": "boundary operator with first coefficient m",
    "ball.adapted-metric": "psi_gamma polynomial and its special cases",
    "ball.critical-potential": "critical potential: two forms and -Delta tau = n",
    "ball.dimension-limit": "psi^(4/(n-2 gamma)) tends to the critical conformal factor",
    "ball.kernel-series-duality": "Poisson kernel integral equals the mode series",
    "ball.funk-hecke": "Funk-Hecke eigenvalue: quadrature and both closed forms",
    "ball.split-asymptotics": "two-branch expansion reconstructs phi_l",
    "ball.energy-additivity": "energy is additive for perturbations vanishing to order m+1",
    "halfspace.kernel-identity": "kernel differentiation identity in the y-variable",
    "halfspace.profile-iteration": "wave operator iterates the frequency profiles",
    "halfspace.traces": "half-space boundary traces from the profiles",
    "halfspace.printed-trace-value": "Delta^k U trace with Gamma(m-k-1) as printed",
    "halfspace.printed-top-normal-sign": "sign of d_y Delta^m U as printed",
    "halfspace.energy-multiplier": "per-frequency energy c_m kappa^(2m+1)",
    "halfspace.gaussian-report": "Gaussian trace inequality, closed form and quadrature",
    "ineq.trace-sharpness": "trace inequality equality on the extremal family",
    "ineq.trace-strict": "strict trace inequality off the extremal family",
    "ineq.printed-extremal-exponent": "extremal exponent (2m+1-n)/4 as printed",
    "ineq.lebedev-milin": "Lebedev-Milin equality and strictness",
    "ineq.lebedev-milin-constant": "Lebedev-Milin constant from both formulas",
    "ineq.printed-two-sphere-constant": "n = 3 constant 3/(16 pi^3) as printed",
}

REFERENCE_CASES = ((3, 0.7), (4, 1.5), (5, 2.5))
GENERAL_GAMMAS = (0.3, 0.7, 1.2, 2.3)


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    n_min: int = 4
    n_max: int = 7
    m_min: int = 0
    m_max: int | None = None
    lmax: int = 8
    order: int = 200
    L: int = 40
    mode: str = "all"
    workers: int = 1
    seed: int = 20240101

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise UsageError(f"unknown suite {self.suite!r}; choose from {SUITES}")
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.workers < 1:
            raise UsageError("worker count must be at least 1")
        if self.lmax < 0 or self.order < 2 or self.L < 1:
            raise UsageError("lmax >= 0, order >= 2 and L >= 1 are required")
        if self.n_min < 2 or self.n_max < self.n_min:
            raise UsageError(f"empty dimension range {self.n_min}..{self.n_max}")
        if self.suite in ("ball", "inequality", "halfspace", "all") and not self.grid():
            raise UsageError(f"grid n={self.n_min}..{self.n_max}, m={self.m_min}..{self.m_max} has no cell with 2m+1 < n")

    def grid(self) -> list[tuple[int, int]]:
        out = []
        for n in range(self.n_min, self.n_max + 1):
            for m in range(self.m_min, (n - 2) // 2 + 1):
                if self.m_max is not None and m > self.m_max:
                    break
                if 2 * m + 1 < n:
                    out.append((n, m))
        return out

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("workers")  # output must not depend on the schedule
        return d


def _timed(fn, *args) -> Check:
    t = time.perf_counter()
    try:
        c = fn(*args)
    except (ArithmeticError, SharpTraceError) as exc:
        name = fn.__name__.replace("_", " ")
        c = Check(f"{name} {args}" if args else name, "error", "fail", str(exc), 0, details={"error": type(exc).__name__})
    c.runtime_ms = round((time.perf_counter() - t) * 1000, 3)
    return c


def _first_nonzero(pairs):
    """``(residual, details)`` from ``(label, value)`` pairs: the first nonzero value, else 0."""
    bad = [(k, v) for k, v in pairs if v != 0]
    if not bad:
        return Fraction(0), {}
    return bad[0][1], {"nonzero": {str(k): str(v) for k, v in bad[:10]}, "count": len(bad)}


# ---------------------------------------------------------------------------
# specfun


def _cell_specfun(cfg: SuiteConfig) -> list[Check]:
    from ..specfun import gegenbauer_all, gegenbauer_norm_sq, hyp2f1, quad_rule

    out = []

    def closed_forms():
        zs = [0.05, 0.3, 0.49, 0.6, 0.85, 0.97]
        errs = []
        for z in zs:
            if z <= 0.5:  # logarithmic case beyond 1/2
                errs.append(abs(hyp2f1(1, 1, 2, z) - (-math.log1p(-z) / z)) / abs(math.log1p(-z) / z))
            # F(a, 1-a; 3/2; sin^2 x) = sin((2a-1) x) / ((2a-1) sin x)
            x = math.asin(math.sqrt(z))
            ref = math.sin(-0.4 * x) / (-0.4 * math.sin(x))
            errs.append(abs(hyp2f1(0.3, 0.7, 1.5, z) - ref) / abs(ref))
            errs.append(abs(hyp2f1(0.7, 1.3, 1.3, z) - (1 - z) ** -0.7) / (1 - z) ** -0.7)
            x = math.sqrt(z)
            errs.append(abs(hyp2f1(0.5, 0.5, 1.5, z) - math.asin(x) / x) / (math.asin(x) / x))
        return numeric_check("hyp2f1 elementary closed forms", "specfun.hyp2f1-closed-forms", max(errs), 1e-12, {"z": zs})

    def transformations():
        errs = []
        for a, b, c in [(0.3, 1.7, 2.9), (1.2, 0.4, 3.3), (-0.6, 2.2, 1.9)]:
            for z in [0.1, 0.4, 0.7, 0.9]:
                f = hyp2f1(a, b, c, z)
                euler = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
                # (c-a) F(a-1) + (2a - c + (b-a) z) F(a) + a (z-1) F(a+1) = 0
                contig = (c - a) * hyp2f1(a - 1, b, c, z) + (2 * a - c + (b - a) * z) * f + a * (z - 1) * hyp2f1(a + 1, b, c, z)
                errs.append(abs(contig) / abs(f))
                errs.append(abs(f - euler) / abs(f))
            if c - a - b > 0:
                gauss = math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))
                errs.append(abs(hyp2f1(a, b, c, 1.0) - gauss) / abs(gauss))
        return numeric_check("hyp2f1 transformation identities", "specfun.hyp2f1-transformations", max(errs), 1e-12)

    def orthogonality():
        worst = 0.0
        for n in (2, 3, 4, 7):
            rule = quad_rule("sphere", n, 60)
            a = (n - 1) / 2
            C = gegenbauer_all(a, 12, rule.nodes)
            G = (C * rule.weights) @ C.T
            D = np.array([gegenbauer_norm_sq(a, k) for k in range(13)])
            worst = max(worst, float(np.max(np.abs(G - np.diag(D)) / np.sqrt(np.outer(D, D)))))
        return numeric_check("Gegenbauer orthogonality, K=12", "specfun.gegenbauer-orthogonality", worst, 1e-12)

    def masses():
        errs = []
        for dom, n, alpha, exact in [
            ("sphere", 3, 0.0, math.pi / 2),
            ("sphere", 4, 0.0, 4 / 3),
            ("interval01", None, 0.0, 1.0),
            ("halfline", None, 0.0, 1.0),
            ("halfline", None, 2.5, math.gamma(3.5)),
        ]:
            r = quad_rule(dom, n, 40, alpha)
            errs.append(abs(float(np.sum(r.weights)) - exact) / exact)
        return numeric_check("quadrature masses", "specfun.quadrature-mass", max(errs), 1e-12)

    for fn in (closed_forms, transformations, orthogonality, masses):
        out.append(_timed(fn))
    return out


# ---------------------------------------------------------------------------
# ball, exact cells


def _cell_ball_exact(n: int, m: int, lmax: int) -> list[Check]:
    from ..ballmodel.energy import energy_identity_check, green_first_step, printed_boundary_value
    from ..ballmodel.profiles import boundary_traces, canonical_profile, delta_k_Vm, iterate_laplacian, verify_mode_eigen
    from ..sphere import ModelParams

    P = ModelParams.half_integer(n, m)
    tag = f"n={n} m={m} l<={lmax}"
    ls = range(lmax + 1)
    out = []

    def polyharmonic():
        pairs = []
        for l in ls:
            z = iterate_laplacian(canonical_profile(P, l), n, m + 1)
            pairs.append((l, Fraction(0) if z.is_zero() else max(abs(c) for c in z.poly.coeffs)))
        r, d = _first_nonzero(pairs)
        return exact_check(f"polyharmonic {tag}", "ball.polyharmonic", r, d)

    def closed_form():
        pairs = []
        for l in ls:
            V = canonical_profile(P, l)
            for k in range(m + 2):
                diff = iterate_laplacian(V, n, k) - delta_k_Vm(P, l, k)
                pairs.append(((l, k), Fraction(0) if diff.is_zero() else max(abs(c) for c in diff.poly.coeffs)))
        r, d = _first_nonzero(pairs)
        return exact_check(f"iterated Laplacian closed form {tag}", "ball.laplacian-closed-form", r, d)

    def normalization():
        pairs = []
        for l in ls:
            p = canonical_profile(P, l).poly
            pairs.append(((l, "value"), p(1) - 1))
            a = l + Fraction(n - 1, 2) - m
            for k in range(1, m + 1):
                want = (-1) ** k * pochhammer(a, k) * pochhammer(Fraction(-m), k) / pochhammer(Fraction(-2 * m), k)
                pairs.append(((l, k), p.deriv(k)(1) - want))
        r, d = _first_nonzero(pairs)
        return exact_check(f"phi_l(1)=1 and boundary derivatives {tag}", "ball.profile-derivatives", r, d)

    def traces():
        pairs, second = [], []
        for l in ls:
            T = boundary_traces(P, l)
            for k, v in T.residuals.items():
                if k == "second_normal":
                    second.append((l, v))
                else:
                    pairs.append(((l, k), v))
        r1, d1 = _first_nonzero(pairs)
        r2, d2 = _first_nonzero(second)
        return [
            exact_check(f"Dirichlet traces {tag}", "ball.dirichlet-traces", r1, d1),
            exact_check(f"second normal derivative {tag}", "ball.second-normal", r2, d2),
        ]

    def eigen():
        pairs = []
        for l in ls:
            res = verify_mode_eigen(P, l)
            size = Fraction(0) if res.residual.is_zero() else max(abs(c) for c in res.residual.poly.coeffs)
            pairs.append((l, size if res.ok or size else Fraction(1)))
        r, d = _first_nonzero(pairs)
        return exact_check(f"mode eigen equation {tag}", "ball.mode-eigen", r, d)

    def energy():
        rows = [energy_identity_check(P, l) for l in ls]
        r, d = _first_nonzero([(e.l, e.residual_derived) for e in rows])
        checks = [exact_check(f"energy identity, derived symbol {tag}", "ball.energy-identity", r, d)]
        if m == 1:
            r, d = _first_nonzero([(e.l, e.residual_two_sphere) for e in rows])
            checks.append(exact_check(f"m=1 boundary form {tag}", "ball.two-sphere-form", r, d))
        r, d = _first_nonzero([(e.l, e.residual_paper) for e in rows])
        d["discrepancy_by_l"] = {e.l: str(e.residual_paper) for e in rows}
        checks.append(exact_check(f"printed boundary operator {tag}", "ball.printed-boundary-operator", r, d, flag_if_nonzero=True))
        if m >= 1:
            pairs = [(e.l, printed_boundary_value(n, m, e.l, first_coefficient=m) - e.derived) for e in rows]
            r, d = _first_nonzero(pairs)
            checks.append(exact_check(f"boundary operator with first coefficient m {tag}", "ball.corrected-boundary-operator", r, d))
            pairs = []
            for l in ls:
                g = green_first_step(P, l)
                pairs += [((l, "interior+boundary"), g["residual"]), ((l, "closed"), g["boundary_residual"])]
            r, d = _first_nonzero(pairs)
            checks.append(exact_check(f"first Green step {tag}", "ball.green-first-step", r, d))
        return checks

    def additivity(seed: int):
        from ..ballmodel.energy import exact_energy, perturbation_profile

        rng = random.Random(seed)
        pairs = []
        for i in range(20):
            l = rng.randrange(0, lmax + 1)
            q = Poly([Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(rng.randint(1, 3))])
            V = canonical_profile(P, l)
            w = perturbation_profile(l, m, q)
            pairs.append((i, exact_energy([V + w], P) - exact_energy([V], P) - exact_energy([w], P)))
        r, d = _first_nonzero(pairs)
        return exact_check(f"energy additivity, 20 random perturbations {tag}", "ball.energy-additivity", r, d)

    out.append(_timed(polyharmonic))
    out.append(_timed(closed_form))
    out.append(_timed(normalization))
    t = time.perf_counter()
    tr = traces()
    for c in tr:
        c.runtime_ms = round((time.perf_counter() - t) * 1000 / len(tr), 3)
    out += tr
    out.append(_timed(eigen))
    t = time.perf_counter()
    en = energy()
    for c in en:
        c.runtime_ms = round((time.perf_counter() - t) * 1000 / len(en), 3)
    out += en
    out.append(_timed(additivity, 1000 * n + m))
    return out


def _cell_ball_metric(n: int) -> list[Check]:
    from ..ballmodel.metric import critical_potential, critical_potential_pochhammer, psi_polynomial, tau_laplacian_residual
    from ..ballmodel.profiles import phi_in_rho
    from ..sphere import ModelParams

    out = []

    def psi():
        pairs = [("psi_1/2 - 1", psi_polynomial(n, 0) - Poly.const(1)), ("psi_3/2", psi_polynomial(n, 1) - Poly([1, Fraction(n - 3, 2)]))]
        for m in range(0, (n - 2) // 2 + 1):
            if 2 * m + 1 < n:
                pairs.append((f"m={m}", psi_polynomial(n, m) - phi_in_rho(ModelParams.half_integer(n, m), 0)))
        pairs = [(k, Fraction(0) if v.is_zero() else max(abs(c) for c in v.coeffs)) for k, v in pairs]
        r, d = _first_nonzero(pairs)
        return exact_check(f"adapted metric polynomial n={n}", "ball.adapted-metric", r, d)

    def tau():
        S1, S2 = critical_potential(n), critical_potential_pochhammer(n)
        res = tau_laplacian_residual(n)
        pairs = [("forms", S1 - S2), ("laplacian", res)]
        pairs = [(k, Fraction(0) if v.is_zero() else max(abs(c) for c in v.coeffs)) for k, v in pairs]
        r, d = _first_nonzero(pairs)
        d["S"] = str(S1)
        return exact_check(f"critical potential n={n}", "ball.critical-potential", r, d)

    out.append(_timed(psi))
    if n % 2 == 1:
        out.append(_timed(tau))
    return out


# ---------------------------------------------------------------------------
# ball, numeric cells


def _cell_ball_general(n: int, lmax: int) -> list[Check]:
    from ..ballmodel.extension import split_asymptotics
    from ..ballmodel.profiles import PhiFunction, verify_mode_eigen
    from ..sphere import ModelParams

    out = []
    gammas = [g for g in GENERAL_GAMMAS if g < n / 2]

    def normalization():
        errs = [abs(PhiFunction(n, g, l)(1.0) - 1) for g in gammas for l in range(lmax + 1)]
        return numeric_check(f"phi_l(1)=1 general gamma n={n}", "ball.profile-normalization", max(errs, default=0.0), 1e-12, {"gammas": gammas})

    def eigen():
        errs = [verify_mode_eigen(ModelParams(n, g), l).residual for g in gammas for l in range(min(lmax, 4) + 1)]
        return numeric_check(f"mode eigen equation general gamma n={n}", "ball.mode-eigen", max(errs, default=0.0), 1e-10)

    def split():
        errs = []
        for g in gammas:
            for l in range(min(lmax, 4) + 1):
                for rho in (0.05, 0.2):
                    F, H = split_asymptotics(ModelParams(n, g), l, rho)
                    ref = PhiFunction(n, g, l)(1 - 2 * rho)
                    errs.append(abs(F + rho ** (2 * g) * H - ref) / max(1.0, abs(ref)))
        return numeric_check(f"two-branch expansion n={n}", "ball.split-asymptotics", max(errs, default=0.0), 1e-10)

    if gammas:
        out += [_timed(normalization), _timed(eigen), _timed(split)]
    return out


def _cell_ball_reference(n: int, gamma: float, order: int, L: int) -> list[Check]:
    from ..ballmodel.extension import (
        funk_hecke_kernel_lambda,
        funk_hecke_phi_form,
        funk_hecke_scale,
        funk_hecke_series_form,
        poisson_extend,
        series_extend,
    )
    from ..ballmodel.inequality import extremal_exponent
    from ..specfun import gegenbauer_all
    from ..sphere import ModelParams, ZonalFunction, zonal_expand

    P = ModelParams(n, gamma)
    a = (n - 1) / 2

    def duality():
        e = extremal_exponent(n, gamma)
        data = {
            "one": ZonalFunction.from_coeffs([1.0], n, "one"),
            "C2": ZonalFunction((0.0, 0.0, 1.0), n, lambda t: gegenbauer_all(a, 2, t)[2], label="C2"),
            "extremal(0.3)": zonal_expand(lambda t: (1 - 0.3 * t) ** e, n, L, order),
        }
        worst = 0.0
        for f in data.values():
            for r in (0.0, 0.3, 0.5, 0.7, 0.9):
                for t0 in (-1.0, -0.5, 0.0, 0.5, 1.0):
                    k = poisson_extend(f, r, t0, P, order)
                    s = series_extend(f, r, t0, P)
                    worst = max(worst, abs(k - s) / max(1.0, abs(s)))
        return numeric_check(f"kernel vs series n={n} gamma={gamma}", "ball.kernel-series-duality", worst, 1e-8, {"points": 25, "data": list(data)})

    def funk_hecke():
        worst = 0.0
        for l in range(9):
            for r in (0.2, 0.5, 0.8):
                q = funk_hecke_kernel_lambda(P, l, r, order)
                A = funk_hecke_series_form(P, l, r)
                B = funk_hecke_phi_form(P, l, r)
                S = funk_hecke_scale(P, l, r, order)
                worst = max(worst, abs(q - A) / max(abs(A), S), abs(q - B) / max(abs(B), S), abs(A - B) / abs(A))
        return numeric_check(f"Funk-Hecke eigenvalues n={n} gamma={gamma}", "ball.funk-hecke", worst, 1e-10)

    return [_timed(duality), _timed(funk_hecke)]


def _cell_dimension_limit() -> list[Check]:
    from ..ballmodel.metric import critical_potential, dimension_limit

    def run():
        S = critical_potential(3)
        errs = [abs(dimension_limit(1, rho) - math.exp(2 * float(S(rho)))) / math.exp(2 * float(S(rho))) for rho in (0.05, 0.2, 0.35, 0.5)]
        return numeric_check("psi_(3/2)^(4/(n-3)) as n -> 3", "ball.dimension-limit", max(errs), 1e-6)

    return [_timed(run)]


# ---------------------------------------------------------------------------
# halfspace


def _cell_halfspace_exact(m: int) -> list[Check]:
    from ..halfspace import apply_wave, energy_multiplier, freq_profile, halfspace_boundary_traces, kernel_identity_check
    from ..ballmodel.profiles import boundary_constant

    out = []

    def kernel():
        res = kernel_identity_check(m)
        return exact_check(f"kernel identity m={m}, symbolic n", "halfspace.kernel-identity", Fraction(len(res)), {"terms": [str(t) for t in res]})

    out.append(_timed(kernel))
    if m > 5:
        return out

    def iteration():
        pairs = [(k, Fraction(0) if apply_wave(freq_profile(m, k)) == freq_profile(m, k + 1) else 1) for k in range(m + 1)]
        pairs.append(("U(0)", freq_profile(m, 0).value_at_zero() - 1))
        r, d = _first_nonzero(pairs)
        return exact_check(f"profile iteration m={m}", "halfspace.profile-iteration", r, d)

    def traces():
        T = halfspace_boundary_traces(m)
        res = T.residuals
        pairs = [((key, i), v) for key in ("values", "lower_normals", "pure_even", "pure_odd") for i, v in enumerate(res[key])]
        pairs.append(("top_normal", res["top_normal"]))
        r, d = _first_nonzero(pairs)
        pr = T.printed_residuals
        rv, dv = _first_nonzero(list(enumerate(pr["values"])))
        dv["by_k"] = [str(x) for x in pr["values"]]
        return [
            exact_check(f"boundary traces m={m}", "halfspace.traces", r, d),
            exact_check(f"printed trace value reading m={m}", "halfspace.printed-trace-value", rv, dv, flag_if_nonzero=True),
            exact_check(f"printed top normal sign m={m}", "halfspace.printed-top-normal-sign", pr["top_normal"], {}, flag_if_nonzero=True),
        ]

    def multiplier():
        c, p = energy_multiplier(m)
        return exact_check(f"energy multiplier m={m}", "halfspace.energy-multiplier", c - boundary_constant(m), {"c_m": str(c), "power": p})

    out.append(_timed(iteration))
    t = time.perf_counter()
    tr = traces()
    for c in tr:
        c.runtime_ms = round((time.perf_counter() - t) * 1000 / len(tr), 3)
    out += tr
    out.append(_timed(multiplier))
    return out


def _cell_halfspace_gaussian(n: int, m: int) -> list[Check]:
    from ..halfspace import halfspace_trace_report

    def run():
        reps = [halfspace_trace_report(n, m, s) for s in (0.5, 1.0, 2.0)]
        ratios = [r.ratio for r in reps]
        spread = (max(ratios) - min(ratios)) / ratios[0]
        quad = max(max(r.extras["rhs_quadrature_rel_err"], r.extras["lhs_quadrature_rel_err"]) for r in reps)
        below = max(0.0, 1 - min(ratios))
        # one residual combining the three requirements, each against its own tolerance
        worst = max(spread / 1e-10, quad / 1e-9, below / 1e-12) * 1e-10
        return numeric_check(
            f"Gaussian report n={n} m={m}",
            "halfspace.gaussian-report",
            worst,
            1e-10,
            {"ratio": ratios[0], "sigma_spread": spread, "quadrature_rel_err": quad},
        )

    return [_timed(run)]


# ---------------------------------------------------------------------------
# inequality


def _cell_trace_inequality(n: int, m: int, order: int, L: int) -> list[Check]:
    from ..ballmodel.inequality import extremal, perturbed, trace_inequality_report
    from ..sphere import ModelParams

    P = ModelParams.half_integer(n, m)

    def sharp():
        reps = [trace_inequality_report(P, extremal(x0), L, order) for x0 in (0.0, 0.3)]
        worst = max(abs(r.ratio - 1) for r in reps)
        return numeric_check(f"extremal equality n={n} m={m}", "ineq.trace-sharpness", worst, 1e-6, {"ratios": [r.ratio for r in reps]})

    def strict():
        r = trace_inequality_report(P, perturbed(), L, order)
        return numeric_check(f"perturbed strictness n={n} m={m}", "ineq.trace-strict", max(0.0, 1 + 1e-4 - r.ratio), 0.0, {"ratio": r.ratio})

    def printed_exponent():
        r = trace_inequality_report(P, extremal(0.3, "printed"), L, order)
        return numeric_check(
            f"printed extremal exponent n={n} m={m}", "ineq.printed-extremal-exponent", r.ratio - 1, 1e-6, {"ratio": r.ratio}, flag_if_over=True
        )

    return [_timed(sharp), _timed(strict), _timed(printed_exponent)]


def _cell_lebedev_milin(n: int, order: int, L: int) -> list[Check]:
    from ..ballmodel.inequality import const, lebedev_milin_report, log_extremal, perturbed
    from ..sphere import ModelParams

    P = ModelParams.half_integer(n, (n - 1) // 2)

    def run():
        c = lebedev_milin_report(P, const(1.0), L, order)
        e = lebedev_milin_report(P, log_extremal(0.3), L, order)
        p = lebedev_milin_report(P, perturbed(log_extremal(0.3)), L, order)
        worst = max(abs(c.lhs), abs(c.rhs), abs(e.rhs - e.lhs) / abs(e.lhs), max(0.0, p.lhs - p.rhs + 1e-9))
        return numeric_check(
            f"Lebedev-Milin n={n}",
            "ineq.lebedev-milin",
            worst,
            1e-6,
            {"const": [c.lhs, c.rhs], "extremal_ratio": e.ratio, "perturbed_ratio": p.ratio},
        )

    def constant():
        from ..ballmodel.inequality import lebedev_milin_constant, lebedev_milin_constant_chain

        K, K2 = lebedev_milin_constant(n), lebedev_milin_constant_chain(n)
        return numeric_check(f"Lebedev-Milin constant n={n}", "ineq.lebedev-milin-constant", abs(K - K2) / K, 1e-14, {"constant": K})

    out = [_timed(run), _timed(constant)]
    if n == 3:

        def printed():
            K = 3 / (16 * math.pi**2)
            return numeric_check(
                "printed n=3 constant 3/(16 pi^3)", "ineq.printed-two-sphere-constant", 3 / (16 * math.pi**3) - K, 0.0, {"derived": K}, flag_if_over=True
            )

        out.append(_timed(printed))
    return out


# ---------------------------------------------------------------------------
# orchestration


def _cells(cfg: SuiteConfig) -> list[tuple]:
    suites = ("specfun", "ball", "halfspace", "inequality") if cfg.suite == "all" else (cfg.suite,)
    exact_ok = cfg.mode in ("all", "exact")
    num_ok = cfg.mode in ("all", "numeric")
    grid = cfg.grid()
    ns = range(cfg.n_min, cfg.n_max + 1)
    cells: list[tuple] = []
    for s in suites:
        if s == "specfun" and num_ok:
            cells.append(("specfun", cfg))
        if s == "ball":
            if exact_ok:
                cells += [("ball_exact", n, m, cfg.lmax) for n, m in grid]
                cells += [("ball_metric", n) for n in ns if n >= 3]
            if num_ok:
                cells += [("ball_general", n, cfg.lmax) for n in ns]
                cells += [("ball_reference", n, g, cfg.order, cfg.L) for n, g in REFERENCE_CASES]
                cells.append(("dimension_limit",))
        if s == "halfspace":
            ms = sorted({m for _, m in grid} | set(range(0, 7)))
            if exact_ok:
                cells += [("halfspace_exact", m) for m in ms if m <= 6]
            if num_ok:
                cells += [("halfspace_gaussian", n, m) for n, m in grid]
        if s == "inequality" and num_ok:
            cells += [("trace_inequality", n, m, cfg.order, cfg.L) for n, m in grid]
            cells += [("lebedev_milin", n, cfg.order, cfg.L) for n in ns if n % 2 == 1 and n >= 3]
    return cells


_DISPATCH = {
    "specfun": _cell_specfun,
    "ball_exact": _cell_ball_exact,
    "ball_metric": _cell_ball_metric,
    "ball_general": _cell_ball_general,
    "ball_reference": _cell_ball_reference,
    "dimension_limit": _cell_dimension_limit,
    "halfspace_exact": _cell_halfspace_exact,
    "halfspace_gaussian": _cell_halfspace_gaussian,
    "trace_inequality": _cell_trace_inequality,
    "lebedev_milin": _cell_lebedev_milin,
}


def run_cell(cell: tuple) -> list[Check]:
    return _DISPATCH[cell[0]](*cell[1:])


def resolve_workers(flag: int | None) -> int:
    """Flag, then ``SHARPTRACE_WORKERS``, then the available CPU count."""
    if flag is not None:
        return flag
    env = os.environ.get("SHARPTRACE_WORKERS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SHARPTRACE_WORKERS={env!r} is not an integer") from None
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def run_suite(cfg: SuiteConfig, timestamp: str | None = None) -> Report:
    cfg.validate()
    cells = _cells(cfg)
    if cfg.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(cells))) as ex:
            results = list(ex.map(run_cell, cells))
    else:
        results = [run_cell(c) for c in cells]
    checks = [c for r in results for c in r]
    return Report(cfg.suite, __version__, cfg.echo(), checks, timestamp)


def zero_runtimes(report: Report) -> Report:
    for c in report.checks:
        c.runtime_ms = 0.0
    return report


__all__ = ["SuiteConfig", "PAPER_REFS", "run_suite", "run_cell", "resolve_workers", "zero_runtimes", "SUITES"]
