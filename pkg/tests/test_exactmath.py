import math
from fractions import Fraction as F

import pytest

from sharptrace.errors import SqrtPiExponentError, UsageError
from sharptrace.exactmath import (
    ExactScalar,
    Poly,
    RadialPoly,
    gamma_half,
    gamma_ratio,
    hyp2f1_terminating,
    pochhammer,
    radial_integrate,
)


def test_gamma_half_values():
    assert str(gamma_half(F(5, 2))) == "3/4*sqrt(pi)"
    assert gamma_half(4) == ExactScalar(6)
    for x in (F(1, 2), F(7, 2), F(13, 2), 3):
        assert float(gamma_half(x)) == pytest.approx(math.gamma(float(x)), rel=1e-14)


def test_gamma_ratio_integer_shift_is_rational():
    r = gamma_ratio(F(11, 2), F(5, 2))
    assert r.is_rational and r.rational() == F(7, 2) * F(5, 2) * F(9, 2)
    assert gamma_ratio(F(3, 2), F(7, 2)).rational() == 1 / (F(3, 2) * F(5, 2))


def test_gamma_ratio_mixed_carries_sqrt_pi():
    r = gamma_ratio(3, F(1, 2))
    assert r.e == -1
    assert float(r) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-14)


def test_sqrt_pi_exponent_guard():
    s = ExactScalar(1, 1)
    with pytest.raises(SqrtPiExponentError):
        s * s
    with pytest.raises(SqrtPiExponentError):
        ExactScalar(1, 2)


def test_pochhammer_zero_index_and_poly_argument():
    assert pochhammer(F(-3, 2), 0) == 1
    assert pochhammer(F(1, 2), 3) == F(15, 8)
    n = Poly.x()
    assert pochhammer(n, 2) == Poly([0, 1, 1])
    with pytest.raises(UsageError):
        pochhammer(1, -1)


def test_poly_arithmetic_and_derivative():
    p = Poly([1, F(1, 2), 3])
    q = Poly([0, -1])
    assert (p * q).coeffs == (0, -1, F(-1, 2), -3)
    assert p.deriv() == Poly([F(1, 2), 6])
    assert (p - p).is_zero()
    assert p.compose(Poly([1, 1]))(F(1, 3)) == p(F(4, 3))


def test_terminating_hypergeometric():
    # F(-2, b; c; z) = 1 - 2b/c z + b(b+1)/(c(c+1)) z^2
    b, c = F(3, 2), F(7, 2)
    p = hyp2f1_terminating(-2, b, c)
    assert p == Poly([1, -2 * b / c, b * (b + 1) / (c * (c + 1))])
    with pytest.raises(UsageError):
        hyp2f1_terminating(F(1, 2), F(1, 3), 2)


def test_radial_poly_integration_and_roundtrip():
    h = RadialPoly(2, Poly([1, -1]))  # r^2 - r^4
    assert radial_integrate(h, 3) == F(1, 6) - F(1, 8)
    assert RadialPoly.from_r_poly(h.to_r_poly(), 2) == h
    assert h.deriv_at_one() == 2 - 4
