import math

import numpy as np
import pytest

from conftest import random_params
from gaussadv.gaussian import IsotropicGaussianParams, build_state, mean_photon_number, purity
from gaussadv.fock import (
    CutoffExhaustedError,
    UnconvergedStateError,
    cutoff_search,
    fock_build,
    fock_mean_photon,
    fock_purity,
    fock_qfi_jy,
    spectral_qfi,
    thermal_ratio,
)
from gaussadv.qfi import qfi_jy


def test_thermal_ratio():
    assert thermal_ratio(1) == 0
    assert thermal_ratio(2) == pytest.approx(1 / 3)
    # a thermal mode has purity 1/nu: (1 - T)/(1 + T)
    t = thermal_ratio(4.0)
    assert (1 - t) / (1 + t) == pytest.approx(1 / 4)


def test_vacuum_state():
    s = fock_build(IsotropicGaussianParams(), 4)
    expected = np.zeros_like(s.rho)
    expected[0, 0] = 1
    np.testing.assert_allclose(s.rho, expected, atol=1e-15)
    assert tuple(s.basis[0]) == (0, 0)
    assert (fock_mean_photon(s), fock_purity(s)) == pytest.approx((0, 1), abs=1e-14)
    full = s.full()
    assert full.shape == (16, 16) and full[0, 0] == pytest.approx(1)


def test_thermal_weights():
    s = fock_build(IsotropicGaussianParams(nu=2), 20, leakage_cap=1e-2)
    diag = np.real(np.diagonal(s.rho))
    assert np.abs(s.rho - np.diag(diag)).max() < 1e-14
    weights = (1 / 3) ** s.basis.sum(axis=1)
    np.testing.assert_allclose(diag, weights / weights.sum(), rtol=1e-10)


def test_purity_example():
    s = fock_build(IsotropicGaussianParams(nu=1.5, r_1=0.3), 30)
    assert fock_purity(s) == pytest.approx(1 / 1.5**2, abs=1e-6)


@pytest.mark.parametrize("params, expected, d, tol", [
    (IsotropicGaussianParams(gamma_abs=1), 4.0, 20, 1e-6),
    (IsotropicGaussianParams(r_1=0.5, phi_1=math.pi / 2), 4 * math.sinh(0.5) ** 2, 25, 1e-6),
    (IsotropicGaussianParams(nu=2, gamma_abs=1), 2.0, 30, 1e-5),
])
def test_qfi_examples(params, expected, d, tol):
    assert fock_qfi_jy(fock_build(params, d)) == pytest.approx(expected, abs=tol)


def test_mean_photon_examples():
    assert fock_mean_photon(fock_build(IsotropicGaussianParams(gamma_abs=2), 25)) == pytest.approx(4, abs=1e-8)
    p = IsotropicGaussianParams(nu=2, r_1=0.4, gamma_abs=0.5)
    s = fock_build(p, 35, leakage_cap=1e-6)
    closed = build_state(p)
    assert fock_mean_photon(s) == pytest.approx(mean_photon_number(closed), abs=1e-6)
    assert fock_purity(s) == pytest.approx(purity(closed), abs=1e-6)


def test_cutoff_search_examples():
    assert cutoff_search(IsotropicGaussianParams()) == 2
    assert cutoff_search(IsotropicGaussianParams(gamma_abs=1)) <= 16
    with pytest.raises(CutoffExhaustedError):
        cutoff_search(IsotropicGaussianParams(gamma_abs=100))
    with pytest.raises(ValueError):
        cutoff_search(IsotropicGaussianParams(), target_leakage=0.5)


def test_cutoff_search_matches_leakage(rng):
    for _ in range(5):
        p = random_params(rng, nu=(1, 2), r=(0, 0.6), gamma=(0, 1.5))
        d = cutoff_search(p)
        assert fock_build(p, d).leakage <= 1e-8
        assert fock_build(p, d - 1).leakage > 1e-8


def test_large_state_not_representable():
    # exponentials stay unitary in any truncation, so the trace alone cannot
    # flag a working space that is too small
    s = fock_build(IsotropicGaussianParams(gamma_abs=100), 10)
    assert not s.converged and s.leakage == 1.0


def test_unconverged_raises():
    s = fock_build(IsotropicGaussianParams(nu=2, gamma_abs=2), 4)
    assert not s.converged
    for fn in (fock_qfi_jy, fock_mean_photon, fock_purity):
        with pytest.raises(UnconvergedStateError):
            fn(s)
    with pytest.raises(ValueError):
        fock_build(IsotropicGaussianParams(), 1)


def test_state_invariants(rng):
    p = random_params(rng, nu=(1, 2), r=(0, 0.6), gamma=(0, 1.5))
    s = fock_build(p, cutoff_search(p))
    assert np.abs(s.rho - s.rho.conj().T).max() < 1e-10
    assert np.trace(s.rho).real == pytest.approx(1, abs=1e-12)
    assert np.linalg.eigvalsh(s.rho).min() > -1e-10
    with pytest.raises(ValueError):
        s.rho[0, 0] = 0


def test_spectral_qfi_degenerate_relabel():
    # equal populations: rotating inside the degenerate block must not matter
    rho = np.diag([0.4, 0.4, 0.2]).astype(complex)
    gen = np.array([[0, 1, 1], [1, 0, 1j], [1, -1j, 0]])
    c, s = math.cos(0.7), math.sin(0.7)
    u = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]], dtype=complex)
    rotated = u @ rho @ u.conj().T
    assert spectral_qfi(rotated, gen) == pytest.approx(spectral_qfi(rho, gen), rel=1e-12)
    # pure state: four times the variance
    psi = np.array([1, 1j, 0]) / math.sqrt(2)
    pure = np.outer(psi, psi.conj())
    var = (psi.conj() @ gen @ gen @ psi - (psi.conj() @ gen @ psi) ** 2).real
    assert spectral_qfi(pure, gen) == pytest.approx(4 * var, rel=1e-12)


def test_oracle_agrees_with_closed_form(rng):
    for _ in range(6):
        p = random_params(rng, nu=(1, 2), r=(0, 0.6), gamma=(0, 1.5))
        s = fock_build(p, cutoff_search(p))
        closed = qfi_jy(p)
        assert fock_qfi_jy(s) == pytest.approx(closed, abs=max(1e-4, 1e-3 * closed))
        assert fock_mean_photon(s) == pytest.approx(mean_photon_number(build_state(p)), abs=1e-5)
        assert fock_purity(s) == pytest.approx(1 / p.nu**2, abs=1e-5)
