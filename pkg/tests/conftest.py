import math
import sys

import numpy as np
import pytest

from gaussadv.gaussian import IsotropicGaussianParams
from gaussadv.plo import _plo_unitary_array, qfi_after_plo

TWO_PI = 2 * math.pi


def random_params(rng, nu=(1.0, 3.0), r=(0.0, 1.0), gamma=(0.0, 3.0), **fixed):
    """Uniform draw over a parameter box; ``fixed`` overrides individual fields."""
    values = dict(
        nu=rng.uniform(*nu), gamma_abs=rng.uniform(*gamma),
        alpha=rng.uniform(0, math.pi / 2), phi_d1=rng.uniform(0, TWO_PI),
        phi_d2=rng.uniform(0, TWO_PI), phi_1=rng.uniform(0, TWO_PI),
        phi_2=rng.uniform(0, TWO_PI), theta=rng.uniform(0, TWO_PI),
        psi=rng.uniform(0, TWO_PI), r_1=rng.uniform(*r), r_2=rng.uniform(*r),
    )
    values.update(fixed)
    return IsotropicGaussianParams(**values)


def _axis(u):
    # effective generator u^dag g u of the interferometer, as a Bloch vector
    g = np.array([[0, 1j], [-1j, 0]])
    pauli = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    h = u.conj().T @ g @ u
    return np.array([np.trace(h @ s).real / 2 for s in pauli])


def qfi_matrix_max(params, n_samples=24, seed=0):
    """Largest eigenvalue of the 3x3 QFI matrix over the mode-space generators.

    Every PLO turns the interferometer generator into a unit combination of
    the three Pauli generators, and the QFI is a quadratic form in that
    combination. Its maximum over PLOs is therefore the top eigenvalue, found
    here by a least-squares fit of the form without any optimization.
    """
    rng = np.random.default_rng(seed)
    a, b, c = rng.uniform(0, TWO_PI, (3, n_samples))
    values = qfi_after_plo(params, a, b, c)
    rows = []
    for u in _plo_unitary_array(a, b, c):
        n = _axis(u)
        rows.append([n[0] ** 2, n[1] ** 2, n[2] ** 2, 2 * n[0] * n[1], 2 * n[0] * n[2], 2 * n[1] * n[2]])
    f = np.linalg.lstsq(np.array(rows), values, rcond=None)[0]
    mat = np.array([[f[0], f[3], f[4]], [f[3], f[1], f[5]], [f[4], f[5], f[2]]])
    return float(np.linalg.eigvalsh(mat)[-1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
