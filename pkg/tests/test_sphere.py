import math
from fractions import Fraction as F

import numpy as np
import pytest

from sharptrace.sphere import (
    ModelParams,
    ZonalFunction,
    funk_hecke_lambda,
    gjms_eigenvalue,
    sphere_volume,
    zonal_expand,
)

VOLUME_ORACLE = {1: 6.2831853071795864769, 2: 12.566370614359172954, 3: 19.739208802178717238, 4: 26.318945069571622984, 7: 32.469697011334145745}


@pytest.mark.parametrize("n", sorted(VOLUME_ORACLE))
def test_sphere_volume(n):
    assert sphere_volume(n) == pytest.approx(VOLUME_ORACLE[n], rel=1e-14)


def test_gjms_eigenvalue():
    assert gjms_eigenvalue(5, F(3, 2), 2) == 60
    assert float(gjms_eigenvalue(3, 0.7, 4)) == pytest.approx(9.4969957517576412179, rel=1e-13)
    assert float(gjms_eigenvalue(4, 2.3, 1)) == pytest.approx(29.334632732710416535, rel=1e-13)


def test_model_params():
    p = ModelParams.half_integer(7, 2)
    assert p.gamma == F(5, 2) and p.m == 2 and p.is_subcritical_half_integer
    assert ModelParams.half_integer(5, 2).is_critical


def test_funk_hecke_on_two_sphere():
    # n = 2: lambda_l = 2 pi int_{-1}^1 K(t) P_l(t) dt
    K = lambda t: t**2
    assert funk_hecke_lambda(K, 0, 2) == pytest.approx(4 * math.pi / 3, rel=1e-13)
    assert funk_hecke_lambda(K, 2, 2) == pytest.approx(8 * math.pi / 15, rel=1e-13)
    assert abs(funk_hecke_lambda(K, 1, 2)) < 1e-14


def test_zonal_expand_roundtrip():
    z = zonal_expand(lambda t: 1 + 0.5 * t - t**3, 4, L=6, order=40)
    assert not z.warnings
    t = np.linspace(-1, 1, 7)
    assert np.allclose(z(t), 1 + 0.5 * t - t**3, atol=1e-13)
    assert max(abs(c) for c in z.coeffs[4:]) < 1e-14


def test_mode_norms_of_constant():
    z = ZonalFunction.from_coeffs([2.0], 3)
    assert z.mode_norms_sq()[0] == pytest.approx(4 * sphere_volume(3), rel=1e-14)
