import math
from fractions import Fraction as F

import numpy as np
import pytest
from scipy import special

from sharptrace.errors import UsageError
from sharptrace.halfspace import (
    apply_wave,
    energy_multiplier,
    freq_profile,
    halfspace_boundary_traces,
    halfspace_trace_report,
    kernel_identity_check,
)


@pytest.mark.parametrize("m", range(5))
def test_profile_is_normalized_bessel_potential(m):
    # s^nu K_nu(s) 2^(1-nu) / Gamma(nu), nu = m + 1/2, equals 1 at s = 0
    nu = m + 0.5
    kappa = 1.7
    y = np.array([0.05, 0.4, 1.3, 3.0])
    s = kappa * y
    want = 2 ** (1 - nu) / math.gamma(nu) * s**nu * special.kv(nu, s)
    assert np.allclose(freq_profile(m, 0)(kappa, y), want, rtol=1e-13)


def test_wave_operator_iterates():
    for m in range(5):
        for k in range(m + 1):
            assert apply_wave(freq_profile(m, k)) == freq_profile(m, k + 1)
        assert freq_profile(m, m + 1).is_zero


def test_kernel_identity_symbolic():
    assert kernel_identity_check(4) == []
    assert kernel_identity_check(3, n=6) == []


def test_traces_and_closed_forms():
    for m in range(6):
        assert halfspace_boundary_traces(m).ok
    T = halfspace_boundary_traces(2)
    assert T.pure_even == [1, F(-1, 3), 1]
    assert T.printed_residuals["top_normal"] != 0


@pytest.mark.parametrize("m", range(6))
def test_energy_multiplier(m):
    c, p = energy_multiplier(m)
    assert p == 2 * m + 1
    assert float(c) == pytest.approx(math.factorial(m) * math.sqrt(math.pi) / math.gamma(m + 0.5), rel=1e-14)


def test_gaussian_report():
    a = halfspace_trace_report(5, 1, 0.7)
    b = halfspace_trace_report(5, 1, 1.9)
    assert a.ratio == pytest.approx(b.ratio, rel=1e-12)
    assert a.ratio > 1
    assert a.extras["rhs_quadrature_rel_err"] < 1e-10
    with pytest.raises(UsageError):
        halfspace_trace_report(3, 1)
