"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines.
"""

import math
import random
import time
from fractions import Fraction as F


from sharptrace.ballmodel.energy import derive_boundary_symbol, energy_identity_check, exact_energy, perturbation_profile
from sharptrace.ballmodel.extension import (
    funk_hecke_kernel_lambda,
    funk_hecke_phi_form,
    funk_hecke_scale,
    funk_hecke_series_form,
    poisson_extend,
    series_extend,
)
from sharptrace.ballmodel.inequality import (
    const,
    extremal,
    extremal_exponent,
    lebedev_milin_constant,
    lebedev_milin_report,
    log_extremal,
    perturbed,
    trace_inequality_report,
)
from sharptrace.ballmodel.metric import critical_potential, dimension_limit, psi_polynomial, tau_laplacian_residual
from sharptrace.ballmodel.profiles import PhiFunction, boundary_traces, canonical_profile, iterate_laplacian
from sharptrace.cli.suites import run_cell
from sharptrace.exactmath import Poly
from sharptrace.halfspace import (
    energy_multiplier,
    halfspace_boundary_traces,
    halfspace_trace_report,
    kernel_identity_check,
    profile_energy_at,
)
from sharptrace.specfun import gegenbauer_all
from sharptrace.sphere import ModelParams, ZonalFunction, zonal_expand

GRID = [(n, m) for n in range(4, 11) for m in range(n) if 2 * m + 1 < n]
LS = range(9)
REFERENCE = [(3, 0.7), (4, 1.5), (5, 2.5)]


def verdict(k: int, title: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {title} | {detail}")
    assert ok, detail


def test_01_exact_harmonicity():
    t = time.perf_counter()
    bad = []
    for n, m in GRID:
        P = ModelParams.half_integer(n, m)
        for l in LS:
            if not iterate_laplacian(canonical_profile(P, l), n, m + 1).is_zero():
                bad.append((n, m, l))
    dt = time.perf_counter() - t
    verdict(1, "Delta^(m+1) V_m = 0", not bad and dt < 30, f"{len(GRID) * len(LS)} modes, nonzero={bad[:3]}, {dt:.2f}s")


def test_02_exact_boundary_traces():
    bad = []
    seen_second = 0
    for n, m in GRID:
        P = ModelParams.half_integer(n, m)
        for l in LS:
            res = boundary_traces(P, l).residuals
            seen_second += "second_normal" in res
            bad += [(n, m, l, k) for k, v in res.items() if v != 0]
    # the second-normal closed form is stated for m >= 1; V_0 is harmonic
    ok = not bad and seen_second == sum(1 for _, m in GRID if m >= 1) * len(LS)
    verdict(2, "trace paths agree, incl. second normal", ok, f"nonzero={bad[:3]}, second-normal checks={seen_second}")


def test_03_boundary_symbol_m1():
    bad = []
    flagged = []
    for n in range(4, 10):
        t = derive_boundary_symbol(ModelParams.half_integer(n, 1))
        for l in LS:
            if t(l) != 2 * l * (l + n - 1) + F((n + 1) * (n - 3), 2):
                bad.append((n, l))
        checks = run_cell(("ball_exact", n, 1, 8))
        printed = [c for c in checks if c.paper_ref == "ball.printed-boundary-operator"]
        flagged += [(n, c.status, c.residual) for c in printed]
        # the printed form differs from the derived one at every l
        if any(energy_identity_check(ModelParams.half_integer(n, 1), l).residual_paper == 0 for l in LS):
            bad.append((n, "printed form coincides"))
    ok = not bad and all(s == "flagged" and r != 0 for _, s, r in flagged)
    verdict(3, "t_1(l) = 2l(l+n-1) + (n+1)(n-3)/2; printed form flagged", ok, f"mismatch={bad[:3]}, flagged={[(n, str(r)) for n, _, r in flagged]}")


def test_04_profile_normalization():
    t = time.perf_counter()
    exact_bad = [(n, m, l) for n, m in GRID for l in LS if canonical_profile(ModelParams.half_integer(n, m), l).poly(1) != 1]
    worst = 0.0
    cases = 0
    for n in (3, 4, 5):
        for g in (0.3, 0.7, 1.2, 2.3):
            if g >= n / 2:
                continue
            for l in LS:
                worst = max(worst, abs(PhiFunction(n, g, l)(1.0) - 1))
                cases += 1
    dt = time.perf_counter() - t
    ok = not exact_bad and worst <= 1e-12 and dt < 5
    verdict(4, "phi_l(1) = 1", ok, f"exact failures={exact_bad[:3]}, numeric worst={worst:.2e} over {cases}, {dt:.2f}s")


def test_05_kernel_series_duality():
    t = time.perf_counter()
    worst = 0.0
    for n, g in REFERENCE:
        P = ModelParams(n, g)
        a = (n - 1) / 2
        e = extremal_exponent(n, g)
        data = [
            ZonalFunction.from_coeffs([1.0], n, "one"),
            ZonalFunction((0.0, 0.0, 1.0), n, lambda s, a=a: gegenbauer_all(a, 2, s)[2], label="C2"),
            zonal_expand(lambda s, e=e: (1 - 0.3 * s) ** e, n, 40, 200),
        ]
        for f in data:
            for r in (0.0, 0.3, 0.5, 0.7, 0.9):
                for t0 in (-1.0, -0.5, 0.0, 0.5, 1.0):
                    k = poisson_extend(f, r, t0, P)
                    s = series_extend(f, r, t0, P)
                    worst = max(worst, abs(k - s) / max(1.0, abs(s)))
    dt = time.perf_counter() - t
    verdict(5, "Poisson kernel = mode series", worst <= 1e-8 and dt < 60, f"worst={worst:.2e}, 25 points x 3 data x 3 cases, {dt:.1f}s")


def test_06_funk_hecke_closure():
    worst = 0.0
    worst_closed = 0.0
    for n, g in REFERENCE:
        P = ModelParams(n, g)
        for l in LS:
            for r in (0.2, 0.5, 0.8):
                q = funk_hecke_kernel_lambda(P, l, r)
                A = funk_hecke_series_form(P, l, r)
                B = funk_hecke_phi_form(P, l, r)
                # double-precision cancellation in the quadrature is bounded by the
                # integral of |K C_l|, so that sets the scale of the comparison
                S = funk_hecke_scale(P, l, r)
                worst = max(worst, abs(q - A) / max(abs(A), S))
                worst_closed = max(worst_closed, abs(A - B) / abs(A))
    ok = worst <= 1e-10 and worst_closed <= 1e-10
    verdict(6, "Funk-Hecke quadrature = closed form", ok, f"quadrature worst={worst:.2e}, closed forms worst={worst_closed:.2e}")


def test_07_adapted_metrics():
    exact = all(psi_polynomial(n, 0) == Poly([1]) and psi_polynomial(n, 1) == Poly([1, F(n - 3, 2)]) for n in range(3, 12))
    S = critical_potential(3)
    lim = max(abs(dimension_limit(1, rho) / math.exp(2 * float(S(rho))) - 1) for rho in (0.05, 0.2, 0.35, 0.5))
    tau = {n: tau_laplacian_residual(n).is_zero() for n in (3, 5, 7)}
    ok = exact and lim <= 1e-6 and all(tau.values())
    verdict(7, "psi_1/2, psi_3/2, dimension limit, -Delta tau = n", ok, f"psi exact={exact}, limit err={lim:.2e}, tau={tau}")


def test_08_trace_sharpness():
    t = time.perf_counter()
    ratios = {}
    strict = {}
    for n, m in [(5, 1), (7, 1), (7, 2)]:
        P = ModelParams.half_integer(n, m)
        for x0 in (0.0, 0.3):
            ratios[(n, m, x0)] = trace_inequality_report(P, extremal(x0)).ratio
        for amp, deg in ((0.1, 2), (0.05, 1), (0.2, 3)):
            strict[(n, m, amp, deg)] = trace_inequality_report(P, perturbed(extremal(0.3), amp, deg)).ratio
    dt = time.perf_counter() - t
    worst = max(abs(r - 1) for r in ratios.values())
    least = min(strict.values())
    ok = worst <= 1e-6 and least >= 1 + 1e-4 and dt < 120
    verdict(8, "trace inequality equality and strictness", ok, f"extremal |ratio-1|<={worst:.2e}, perturbed min ratio={least:.4f}, {dt:.1f}s")


def test_09_lebedev_milin():
    P = ModelParams.half_integer(3, 1)
    c = lebedev_milin_report(P, const(1.0))
    e = lebedev_milin_report(P, log_extremal(0.3))
    p = [lebedev_milin_report(P, perturbed(log_extremal(0.3), a, d)).ratio for a, d in ((0.1, 2), (0.1, 1), (0.3, 4))]
    K = lebedev_milin_constant(3)
    Kref = 3 / (16 * math.pi**2)
    flagged = [x for x in run_cell(("lebedev_milin", 3, 200, 40)) if x.paper_ref == "ineq.printed-two-sphere-constant"]
    ok = (
        c.lhs == 0.0
        and c.rhs == 0.0
        and abs(e.ratio - 1) <= 1e-6
        and min(p) > 1
        and abs(K - Kref) <= 1e-15 * Kref
        and len(flagged) == 1
        and flagged[0].status == "flagged"
    )
    detail = f"const {c.lhs}={c.rhs}, extremal ratio={e.ratio:.12f}, perturbed min={min(p):.3f}, K={K:.15g} vs 3/(16 pi^2)={Kref:.15g}"
    verdict(9, "Lebedev-Milin equality, strictness and constant", ok, detail)


def test_10_halfspace_exact():
    t = time.perf_counter()
    kernel = {m: kernel_identity_check(m) for m in range(7)}
    traces = {m: halfspace_boundary_traces(m) for m in range(6)}
    printed_flags = sum(any(v != 0 for v in T.printed_residuals["values"]) for T in traces.values())
    mult = {}
    for m in range(6):
        c, p = energy_multiplier(m)
        want = F(math.factorial(m)) * F(math.factorial(2 * m), 4**m * math.factorial(m)) ** -1  # m! sqrt(pi)/Gamma(m+1/2)
        same = all(profile_energy_at(m, k) == want * F(k) ** (2 * m + 1) for k in (F(1, 7), F(2, 3), F(3), F(11, 2)))
        mult[m] = (c == want and same, str(c))
    dt = time.perf_counter() - t
    ok = all(not v for v in kernel.values()) and all(T.ok for T in traces.values()) and all(v[0] for v in mult.values()) and printed_flags > 0 and dt < 10
    detail = f"kernel residual terms={sum(len(v) for v in kernel.values())}, traces ok m<=5, printed reading differs for {printed_flags} m, c_m={[v[1] for v in mult.values()]}, {dt:.2f}s"
    verdict(10, "half-space kernel, traces, energy multiplier", ok, detail)


def test_11_halfspace_gaussian():
    rows = []
    ok = True
    for n, m in [(5, 1), (7, 2)]:
        reps = [halfspace_trace_report(n, m, s) for s in (0.5, 1.0, 2.0, 3.7)]
        ratios = [r.ratio for r in reps]
        spread = (max(ratios) - min(ratios)) / ratios[0]
        quad = max(max(r.extras["rhs_quadrature_rel_err"], r.extras["lhs_quadrature_rel_err"]) for r in reps)
        ok = ok and min(ratios) >= 1 and spread <= 1e-10 and quad <= 1e-9
        rows.append(f"({n},{m}) ratio={ratios[0]:.6f} spread={spread:.1e} quad={quad:.1e}")
    verdict(11, "Gaussian half-space report", ok, "; ".join(rows))


def test_12_perturbation_additivity():
    rng = random.Random(12)
    bad = []
    for n, m in GRID:
        P = ModelParams.half_integer(n, m)
        for i in range(20):
            l = rng.randrange(9)
            q = Poly([F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(rng.randint(1, 4))])
            V = canonical_profile(P, l)
            w = perturbation_profile(l, m, q)
            if exact_energy([V + w], P) != exact_energy([V], P) + exact_energy([w], P):
                bad.append((n, m, i))
    verdict(12, "energy additivity under admissible perturbations", not bad, f"{20 * len(GRID)} perturbations, failures={bad[:3]}")
