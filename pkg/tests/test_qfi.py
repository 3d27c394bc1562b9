import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_params
from gaussadv.gaussian import IsotropicGaussianParams, build_state, mean_photon_number
from gaussadv.qfi import advantage_gap, auxiliary_params, ftql, gap_tolerance, qfi_jy, xyz

HALF_PI = math.pi / 2


def test_canonical_rotation_coefficients():
    a = auxiliary_params(IsotropicGaussianParams(phi_1=HALF_PI + 0.3, phi_2=0.3, r_1=0.2))
    assert (a.m, a.o, a.p) == pytest.approx((0, 1, 0), abs=1e-15)


def test_displacement_coefficients_without_mixing():
    p = IsotropicGaussianParams(alpha=0.4, phi_1=0.7, phi_2=1.9, phi_d1=0.2, phi_d2=2.3, gamma_abs=1)
    a = auxiliary_params(p)
    t1, t2 = p.phi_1 + p.phi_d2, p.phi_2 + p.phi_d1
    expected = (math.sin(0.4) * math.cos(t1), math.sin(0.4) * math.sin(t1),
                math.cos(0.4) * math.cos(t2), math.cos(0.4) * math.sin(t2))
    assert (a.kappa, a.delta, a.upsilon, a.lambda_) == pytest.approx(expected, abs=1e-14)
    assert a.o == pytest.approx(math.sin(p.phi_1 - p.phi_2))
    assert a.p == pytest.approx(-math.cos(p.phi_1 - p.phi_2))


def test_sum_of_squares(rng):
    for _ in range(500):
        a = auxiliary_params(random_params(rng))
        assert a.m**2 + a.o**2 + a.p**2 == pytest.approx(1, abs=1e-12)
        assert a.kappa**2 + a.delta**2 + a.upsilon**2 + a.lambda_**2 == pytest.approx(1, abs=1e-12)


def test_xyz_examples():
    zero = xyz(3.0, 0, 0)
    assert (zero.x, zero.y, zero.z) == (0, 0, 0)
    c = xyz(1.0, 0.7, 0.0)
    assert c.x == pytest.approx(0, abs=1e-15)
    assert c.y == pytest.approx(0, abs=1e-15)
    assert c.z == pytest.approx(2 * math.sinh(0.7) ** 2 * math.cosh(1.4), rel=1e-13)
    r = 0.6
    big = xyz(1e6, r, r)
    assert big.x == pytest.approx(4 * math.sinh(2 * r) ** 2 - 4 * math.sinh(r) ** 2, rel=1e-9)
    with pytest.raises(ValueError):
        xyz(0.5, 0.1, 0.1)


def _xyz_definition(nu, r1, r2):
    f = nu**2 / (nu**2 + 1)
    s = math.sinh
    x = 4 * f * s(r1 + r2) ** 2 - 2 * (s(r1) ** 2 + s(r2) ** 2)
    y = 4 * f * s(r1 - r2) ** 2 - 2 * (s(r1) ** 2 + s(r2) ** 2)
    z = 2 * f * (s(2 * r1) ** 2 + s(2 * r2) ** 2) - 2 * (s(r1) ** 2 + s(r2) ** 2)
    return x, y, z


@pytest.mark.parametrize("nu", [1, 1.01, 2, 10, 100])
def test_xyz_ordering_and_definition(nu):
    grid = np.linspace(0, 3, 13)
    for r1 in grid:
        for r2 in grid:
            c = xyz(nu, r1, r2)
            scale = max(1.0, abs(c.z))
            assert c.z >= c.x - 1e-12 * scale
            assert c.x >= abs(c.y) - 1e-12 * scale
            assert abs(c.y) >= 0
            assert (c.x, c.y, c.z) == pytest.approx(_xyz_definition(nu, r1, r2), rel=1e-9, abs=1e-9)


@given(gamma=st.floats(0, 50), alpha=st.floats(0, 6.3), d1=st.floats(0, 6.3), d2=st.floats(0, 6.3),
       theta=st.floats(0, 6.3), phi=st.floats(0, 6.3))
@settings(max_examples=60, deadline=None)
def test_coherent_state_is_sql(gamma, alpha, d1, d2, theta, phi):
    p = IsotropicGaussianParams(gamma_abs=gamma, alpha=alpha, phi_d1=d1, phi_d2=d2, theta=theta, phi_1=phi)
    assert qfi_jy(p) == pytest.approx(4 * gamma**2, rel=1e-12, abs=1e-12)
    assert ftql(p) == pytest.approx(4 * mean_photon_number(build_state(p)), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("nu, gamma", [(2, 1), (5, 3.3), (1.2, 0)])
def test_displaced_thermal(nu, gamma, rng):
    for _ in range(10):
        p = random_params(rng, r=(0, 0), nu=(nu, nu), gamma=(gamma, gamma))
        assert qfi_jy(p) == pytest.approx(4 * gamma**2 / nu, rel=1e-12, abs=1e-14)
        assert ftql(p) == pytest.approx(qfi_jy(p), rel=1e-12, abs=1e-14)
        assert abs(advantage_gap(p)) < 1e-13 * max(1, ftql(p))


def test_squeezed_vacuum_value():
    p = IsotropicGaussianParams(r_1=0.5, phi_1=HALF_PI)
    assert qfi_jy(p) == pytest.approx(4 * math.sinh(0.5) ** 2, rel=1e-14)
    assert qfi_jy(p) == pytest.approx(1.0861612696, rel=1e-9)


def test_ftql_examples():
    # nu = 2 with <N> = 3: the thermal part contributes 1, the displacement 2
    p = IsotropicGaussianParams(nu=2, gamma_abs=math.sqrt(2))
    assert mean_photon_number(build_state(p)) == pytest.approx(3)
    assert ftql(p) == pytest.approx(4)


def test_gap_examples():
    p = IsotropicGaussianParams(nu=1.7, r_1=0.6, r_2=0.2, phi_1=HALF_PI)
    assert advantage_gap(p) == pytest.approx(2 * xyz(1.7, 0.6, 0.2).x, rel=1e-13)


def test_gap_identity(rng):
    worst = 0.0
    for _ in range(2000):
        p = random_params(rng, nu=(1, 20), r=(0, 2), gamma=(0, 50))
        q, ref, gap = qfi_jy(p), ftql(p), advantage_gap(p)
        tol = gap_tolerance(q, ref, gap)
        err = abs(gap - (q - ref)) / max(abs(gap), 1e-300)
        # relative to the gap itself, except where it cancels down to round-off
        if abs(gap) >= 1e-12 * max(q, ref):
            assert err <= tol
        worst = max(worst, err)
    assert worst < 1e-6


def test_qfi_nonnegative_and_shift_invariant(rng):
    for _ in range(200):
        p = random_params(rng)
        assert qfi_jy(p) >= 0
        t = rng.uniform(0, 6)
        # shifting phi_1, phi_2 by t and both displacement phases by -t keeps
        # phi_1 + phi_d2, phi_2 + phi_d1 and phi_1 - phi_2
        q = p.replace(phi_1=p.phi_1 + t, phi_2=p.phi_2 + t, phi_d1=p.phi_d1 - t, phi_d2=p.phi_d2 - t)
        assert qfi_jy(q) == pytest.approx(qfi_jy(p), rel=1e-11)


def test_gap_tolerance_rule():
    assert gap_tolerance(10.0, 9.0, 1.0) == 1e-9
    assert gap_tolerance(10.0, 10.0, 1e-13) == 1e-6


def test_large_squeezing_stays_finite():
    p = IsotropicGaussianParams(nu=1e13, r_1=40, r_2=39, theta=0.3, phi_1=1, gamma_abs=1e3)
    assert math.isfinite(qfi_jy(p)) and math.isfinite(advantage_gap(p))
    assert advantage_gap(p) == pytest.approx(qfi_jy(p) - ftql(p), rel=1e-9)
