import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaussadv.separability import (
    displaced_fock_oracle_n2,
    identity_residuals,
    partial_transpose,
    partial_transpose_spectrum,
    printed_partial_transpose,
    single_particle_matrix,
    symmetric_identities,
    two_photon_coefficients,
)

THETAS = [0.0, 0.3, 0.6, 0.9]
ABS = [0.0, 0.5, 1.0, 2.0, 5.0]
PHASES = [0.0, math.pi / 3]

component = st.floats(-3, 3, allow_nan=False)
ratio = st.floats(0, 0.95)


def terms_for(theta):
    # enough thermal terms that theta^n < 1e-13
    return 40 if theta == 0 else max(40, math.ceil(math.log(1e-13) / math.log(theta)) + 1)


def rel_close(a, b, rtol):
    scale = max(np.abs(b).max(), 1e-300)
    return np.abs(a - b).max() <= rtol * scale


def test_zero_displacement():
    c = two_photon_coefficients(0, 0, 0.3, 0.6)
    assert (c.lambda1, c.lambda2, c.omega) == pytest.approx((0.09, 0.36, 0.18))
    assert c.upsilon1 == c.upsilon2 == c.xi == 0
    # |11> in Fock labels is the symmetric single-particle state, so the middle
    # block is full rather than diagonal
    expected = np.diag([0.09, 0.0, 0.0, 0.36])
    expected[1:3, 1:3] = 0.09
    np.testing.assert_allclose(single_particle_matrix(c), expected, atol=1e-15)


def test_symmetric_example_values():
    c = two_photon_coefficients(1, 1, 0.5, 0.5)
    # (1.5^4 + 2 * 1.5^2 + 0.5) / 2, (1.5^2 + 0.5)^2, 1.5^2 * (1.5^2 + 1) / sqrt(2)
    assert c.lambda1 == c.lambda2 == pytest.approx(5.03125)
    assert c.omega == pytest.approx(7.5625)
    assert c.upsilon1 == pytest.approx(2.25 * 3.25 / math.sqrt(2))
    assert c.xi == pytest.approx(1.5**4 / 2)


def test_coherent_state_separable():
    for beta in (0.5, 1 + 1j, 2.0):
        rep = partial_transpose_spectrum(two_photon_coefficients(beta, beta, 0, 0))
        assert rep.separable_in_n2
        assert rep.eigenvalues[0] >= -1e-12 * rep.trace


@given(b1r=component, b1i=component, b2r=component, b2i=component, t1=ratio, t2=ratio)
@settings(max_examples=60, deadline=None)
def test_matrix_structure(b1r, b1i, b2r, b2i, t1, t2):
    c = two_photon_coefficients(complex(b1r, b1i), complex(b2r, b2i), t1, t2)
    assert min(c.lambda1, c.lambda2, c.omega) >= 0
    for layout in ("physical", "printed"):
        m = single_particle_matrix(c, layout)
        assert np.abs(m - m.conj().T).max() <= 1e-12 * max(1, np.abs(m).max())
        assert np.trace(m).real == pytest.approx(c.lambda1 + c.lambda2 + c.omega, rel=1e-12)
    # the sector is a positive operator
    m = single_particle_matrix(c)
    assert np.linalg.eigvalsh(m)[0] >= -1e-10 * np.trace(m).real
    pt = partial_transpose(m)
    assert np.abs(pt - pt.conj().T).max() <= 1e-12 * max(1, np.abs(m).max())


def test_partial_transpose_involution():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    np.testing.assert_allclose(partial_transpose(partial_transpose(m)), m)
    a, b = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
    np.testing.assert_allclose(partial_transpose(np.kron(a, b)), np.kron(a, b.T))


def test_pure_state_oracle():
    beta1, beta2 = 0.8 + 0.3j, -0.4 + 1.1j
    m = displaced_fock_oracle_n2(beta1, beta2, 0, 0)
    # N = 2 part of |beta1>|beta2>, without exp(-|b1|^2 - |b2|^2)
    amp = np.array([beta1**2 / math.sqrt(2), beta1 * beta2 / math.sqrt(2), beta1 * beta2 / math.sqrt(2),
                    beta2**2 / math.sqrt(2)])
    np.testing.assert_allclose(m, np.outer(amp, amp.conj()), atol=1e-14)
    c = two_photon_coefficients(beta1, beta2, 0, 0)
    np.testing.assert_allclose(single_particle_matrix(c), m, atol=1e-14)


def test_symmetric_oracle_example():
    c = two_photon_coefficients(1, 1, 0.5, 0.5)
    oracle = displaced_fock_oracle_n2(1, 1, 0.5, 0.5, 40, 40)
    closed = single_particle_matrix(c)
    ratio = oracle[0, 0] / closed[0, 0]
    assert rel_close(oracle, ratio * closed, 1e-8)
    # the omega entries pin the overall factor
    assert (2 * oracle[1, 1] / ratio).real == pytest.approx(c.omega, rel=1e-8)


@pytest.mark.parametrize("beta1, beta2, t1, t2", [
    (1 + 0.5j, 0.3, 0.2, 0.4),
    (0.7j, -1.2 + 0.2j, 0.5, 0.1),
    (2.0, 0.5 - 0.5j, 0.0, 0.6),
])
def test_oracle_fixes_layout(beta1, beta2, t1, t2):
    c = two_photon_coefficients(beta1, beta2, t1, t2)
    oracle = displaced_fock_oracle_n2(beta1, beta2, t1, t2, terms_for(t1), terms_for(t2))
    ratio = oracle[0, 0] / single_particle_matrix(c)[0, 0]
    assert rel_close(oracle, ratio * single_particle_matrix(c, "physical"), 1e-8)
    assert not rel_close(oracle, ratio * single_particle_matrix(c, "printed"), 1e-3)


def test_oracle_amplitude_flavours_differ():
    printed = displaced_fock_oracle_n2(1, 1, 0.5, 0.5, 40, 40)
    exact = displaced_fock_oracle_n2(1, 1, 0.5, 0.5, 40, 40, amplitudes="exact")
    assert not rel_close(exact, printed * exact[0, 0] / printed[0, 0], 1e-3)
    # both agree when only the p = q = 0 term survives
    np.testing.assert_allclose(displaced_fock_oracle_n2(1, 1j, 0, 0, amplitudes="exact"),
                               displaced_fock_oracle_n2(1, 1j, 0, 0), atol=1e-13)


def test_exact_amplitudes_also_pass_ppt():
    for t, b, ph in itertools.product([0.3, 0.9], [0.5, 2.0], PHASES):
        beta = b * np.exp(1j * ph)
        m = displaced_fock_oracle_n2(beta, beta, t, t, terms_for(t), terms_for(t), "exact")
        assert np.linalg.eigvalsh(partial_transpose(m))[0] >= -1e-12 * np.trace(m).real


@pytest.mark.parametrize("theta, b, phase", list(itertools.product(THETAS, ABS, PHASES)))
def test_symmetric_grid(theta, b, phase):
    beta = b * complex(math.cos(phase), math.sin(phase))
    c = two_photon_coefficients(beta, beta, theta, theta)
    rep = partial_transpose_spectrum(c)
    assert rep.separable_in_n2
    assert rep.isolated_eigenvalue is not None and rep.isolated_eigenvalue >= -1e-12 * rep.trace
    assert rep.isolated_eigenvalue == pytest.approx(min(rep.eigenvalues, key=lambda y: abs(y - rep.isolated_eigenvalue)),
                                                    abs=1e-10 * max(1, rep.trace))
    # the closed-form partial transpose is exact here
    np.testing.assert_allclose(rep.printed_eigenvalues, rep.eigenvalues, atol=1e-10 * max(1, rep.trace))
    assert all(v <= 1e-9 for v in identity_residuals(c).values())


def test_printed_pair_sum_fails():
    c = two_photon_coefficients(1, 1, 0.5, 0.5)
    assert identity_residuals(c, "printed")["pairs"] > 1e-3
    assert identity_residuals(c, "printed")["sum"] <= 1e-12
    ids = symmetric_identities(c)
    assert ids["product"][0] == pytest.approx(ids["product"][1], rel=1e-10)


def test_asymmetric_printed_transpose_is_only_indicative():
    c = two_photon_coefficients(1 + 0.5j, 0.3, 0.2, 0.4)
    rep = partial_transpose_spectrum(c)
    assert rep.isolated_eigenvalue is None
    assert rep.eigenvalues[0] > 0.05
    assert rep.printed_eigenvalues[0] < 0
    np.testing.assert_allclose(np.linalg.eigvalsh(printed_partial_transpose(c)), rep.printed_eigenvalues)
    with pytest.raises(ValueError):
        symmetric_identities(c)


@pytest.mark.parametrize("theta", [-0.1, 1.0, float("nan")])
def test_bad_theta(theta):
    with pytest.raises(ValueError):
        two_photon_coefficients(1, 1, theta, 0.2)


def test_bad_inputs():
    with pytest.raises(ValueError):
        two_photon_coefficients(float("inf"), 1, 0.1, 0.1)
    with pytest.raises(ValueError):
        displaced_fock_oracle_n2(1, 1, 0.9, 0.9, 40, 40)
    with pytest.raises(ValueError):
        displaced_fock_oracle_n2(1, 1, 0.1, 0.1, amplitudes="other")
    with pytest.raises(ValueError):
        single_particle_matrix(two_photon_coefficients(1, 1, 0, 0), layout="other")
