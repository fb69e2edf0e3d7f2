import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from sharptrace.ballmodel.energy import (
    derive_boundary_symbol,
    energy_identity_check,
    exact_energy,
    green_first_step,
    perturbation_profile,
    printed_boundary_value,
)
from sharptrace.ballmodel.extension import (
    funk_hecke_kernel_lambda,
    funk_hecke_phi_form,
    funk_hecke_series_form,
    poisson_extend,
    series_extend,
    split_asymptotics,
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
from sharptrace.ballmodel.metric import (
    conformal_factor,
    critical_potential,
    critical_potential_pochhammer,
    dimension_limit,
    psi_polynomial,
    tau_laplacian_residual,
)
from sharptrace.ballmodel.profiles import (
    PhiFunction,
    boundary_constant,
    boundary_traces,
    canonical_profile,
    iterate_laplacian,
    verify_mode_eigen,
)
from sharptrace.errors import AccuracyError, DomainError, UnsupportedRegimeError, UsageError
from sharptrace.exactmath import Poly
from sharptrace.sphere import ModelParams, gjms_eigenvalue

# phi_l(R) from the hypergeometric representation at 30 digits (mpmath), frozen
PHI_ORACLE = [
    ((3, 0.7, 2, 0.5), 1.2250266275100605163),
    ((4, 1.2, 0, 0.81), 1.0715177822525922132),
    ((5, 2.3, 5, 0.25), 4.194176068353433157),
]


def test_canonical_profile_exact_values():
    assert canonical_profile(ModelParams.half_integer(5, 1), 2).poly(F(1, 2)) == F(7, 4)
    assert canonical_profile(ModelParams.half_integer(7, 2), 3).poly(F(9, 25)) == F(1111, 375)


@pytest.mark.parametrize("args,want", PHI_ORACLE)
def test_phi_general_order(args, want):
    n, g, l, R = args
    assert PhiFunction(n, g, l)(R) == pytest.approx(want, rel=1e-13)


def test_profile_rejects_bad_orders():
    with pytest.raises(DomainError):
        canonical_profile(ModelParams(3, F(5, 2)), 0)
    with pytest.raises(UsageError):
        canonical_profile(ModelParams(5, 0.7), 0)


def test_polyharmonic_order_is_sharp():
    P = ModelParams.half_integer(7, 2)
    V = canonical_profile(P, 3)
    assert iterate_laplacian(V, 7, 3).is_zero()
    assert not iterate_laplacian(V, 7, 2).is_zero()


def test_boundary_traces_and_eigen_equation():
    for n, m in [(4, 1), (7, 2), (9, 3)]:
        P = ModelParams.half_integer(n, m)
        for l in (0, 3):
            assert boundary_traces(P, l).ok
            assert verify_mode_eigen(P, l).ok


def test_boundary_constant():
    # m! sqrt(pi) / Gamma(m + 1/2)
    for m in range(6):
        want = math.factorial(m) * math.sqrt(math.pi) / math.gamma(m + 0.5)
        assert float(boundary_constant(m)) == pytest.approx(want, rel=1e-14)


def test_energy_identity_smallest_case():
    e = energy_identity_check(ModelParams.half_integer(5, 1), 0)
    # c_1 P_3 at l = 0 is 2 Gamma(4)/Gamma(1) = 12; t_1(0) = (n+1)(n-3)/2 = 6
    assert e.beckner_form == 12 and e.derived == 6 and e.energy == 6
    assert e.residual_derived == 0
    assert e.residual_paper != 0


def test_boundary_symbol_closed_form_m1():
    for n in range(4, 10):
        t = derive_boundary_symbol(ModelParams.half_integer(n, 1))
        for l in range(9):
            assert t(l) == 2 * l * (l + n - 1) + F((n + 1) * (n - 3), 2)


def test_corrected_first_coefficient_closes_identity():
    for n, m in [(6, 2), (9, 3), (11, 4)]:
        t = derive_boundary_symbol(ModelParams.half_integer(n, m))
        for l in range(5):
            assert printed_boundary_value(n, m, l, first_coefficient=m) == t(l)


def test_green_first_step_closes():
    g = green_first_step(ModelParams.half_integer(7, 2), 2)
    assert g["residual"] == 0 and g["boundary_residual"] == 0


def test_energy_additivity_for_admissible_perturbations():
    rng = random.Random(7)
    P = ModelParams.half_integer(8, 2)
    for _ in range(5):
        l = rng.randrange(6)
        q = Poly([F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(3)])
        V, w = canonical_profile(P, l), perturbation_profile(l, 2, q)
        assert exact_energy([V + w], P) == exact_energy([V], P) + exact_energy([w], P)


def test_energy_grows_under_perturbation():
    P = ModelParams.half_integer(6, 1)
    V, w = canonical_profile(P, 1), perturbation_profile(1, 1, Poly([1]))
    assert exact_energy([V + w], P) > exact_energy([V], P)


# ---- metric


def test_psi_special_cases():
    for n in range(4, 10):
        assert psi_polynomial(n, 0) == Poly([1])
        assert psi_polynomial(n, 1) == Poly([1, F(n - 3, 2)])


def test_critical_potential_three_dimensions():
    # (1 + (n-3) rho/2)^(4/(n-3)) -> e^(2 rho) as n -> 3
    assert critical_potential(3) == Poly([0, 1])
    for n in (3, 5, 7, 9):
        assert critical_potential(n) == critical_potential_pochhammer(n)
        assert tau_laplacian_residual(n).is_zero()
    for rho in (0.1, 0.4):
        assert dimension_limit(1, rho) == pytest.approx(math.exp(2 * rho), rel=1e-6)


def test_conformal_factor_subcritical():
    P = ModelParams.half_integer(7, 1)
    assert conformal_factor(P, 0.5) == pytest.approx(2.0**1.0, rel=1e-14)


# ---- extension


def test_kernel_matches_series_at_a_point():
    P = ModelParams(4, 1.5)
    f = lambda t: 1 + 0.3 * t**2
    from sharptrace.sphere import zonal_expand

    z = zonal_expand(f, 4, L=4, order=40)
    assert poisson_extend(z, 0.6, 0.2, P) == pytest.approx(series_extend(z, 0.6, 0.2, P), rel=1e-10)
    # the constant datum extends to rho^(n-s) phi_0(r^2) with rho = 1/2 at the origin, n - s = 1/2
    one = zonal_expand(lambda t: np.ones_like(t), 4, L=2, order=20)
    assert series_extend(one, 0.0, 0.0, P) == pytest.approx(0.5**0.5 * PhiFunction(4, 1.5, 0)(0.0), rel=1e-12)


def test_kernel_radius_limit():
    with pytest.raises(AccuracyError):
        poisson_extend(lambda t: 1 + 0 * t, 0.95, 0.0, ModelParams(3, 0.7))


def test_funk_hecke_routes_agree():
    P = ModelParams(5, 2.5)
    for l in (0, 4):
        q = funk_hecke_kernel_lambda(P, l, 0.5)
        assert q == pytest.approx(funk_hecke_series_form(P, l, 0.5), rel=1e-10)
        assert q == pytest.approx(funk_hecke_phi_form(P, l, 0.5), rel=1e-10)


def test_split_asymptotics():
    P = ModelParams(5, 1.2)
    F_, H = split_asymptotics(P, 2, 0.1)
    assert F_ + 0.1**2.4 * H == pytest.approx(PhiFunction(5, 1.2, 2)(0.8), rel=1e-12)
    with pytest.raises(UnsupportedRegimeError):
        split_asymptotics(ModelParams(4, 1.5), 1, 0.1)


# ---- inequalities


def test_extremal_exponent_choices():
    assert extremal_exponent(5, 1.5) == -1.0
    assert extremal_exponent(5, 1.5, "printed") == -0.5
    with pytest.raises(UsageError):
        extremal(1.2)


def test_trace_report_structure():
    r = trace_inequality_report(ModelParams.half_integer(5, 1), extremal(0.3))
    assert r.breakdown_closes()
    assert r.ratio == pytest.approx(1.0, abs=1e-10)
    assert r.extras["beckner_form"] == pytest.approx(r.rhs, rel=1e-12)
    # sharp constant c_m P(0) omega_n^((2m+1)/n)
    from sharptrace.sphere import sphere_volume

    assert r.sharp_constant == pytest.approx(2 * float(gjms_eigenvalue(5, F(3, 2), 0)) * sphere_volume(5) ** 0.6, rel=1e-14)


def test_unresolved_datum_raises():
    with pytest.raises(AccuracyError):
        trace_inequality_report(ModelParams.half_integer(5, 1), extremal(0.95), L=6, order=40)


def test_trace_report_rejects_critical_order():
    with pytest.raises(UsageError):
        trace_inequality_report(ModelParams.half_integer(5, 2), const())


def test_lebedev_milin_constant_value():
    assert lebedev_milin_constant(3) == pytest.approx(0.018997721932938332146, rel=1e-14)


def test_lebedev_milin_reports():
    P = ModelParams.half_integer(5, 2)
    assert lebedev_milin_report(P, const(2.0)).lhs == 0.0
    e = lebedev_milin_report(P, log_extremal(0.4))
    assert e.ratio == pytest.approx(1.0, abs=1e-9)
    p = lebedev_milin_report(P, perturbed(log_extremal(0.4), 0.2, 1))
    assert p.ratio > 1 + 1e-4
