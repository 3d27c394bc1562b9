"""Two-photon sector of a two-mode displaced thermal state and its PPT test.

The ``N = 2`` part of the state is written in first quantization: two
particles, each in mode 1 or mode 2, with basis ``|11>, |12>, |21>, |22>``
(particle a, particle b). Positivity of the partial transpose decides
particle separability for this 2x2 system.

Displaced Fock amplitudes come in two flavours. ``"printed"`` uses the
closed expression whose thermal sum gives the coefficient formulas below.
``"exact"`` uses the true matrix elements of the displacement operator,
``<m|D(beta)|p>``, for comparison. The two differ in the sign of the terms
linear in ``p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

__all__ = [
    "TwoPhotonCoefficients",
    "PPTReport",
    "two_photon_coefficients",
    "single_particle_matrix",
    "partial_transpose",
    "printed_partial_transpose",
    "partial_transpose_spectrum",
    "symmetric_identities",
    "identity_residuals",
    "displaced_fock_oracle_n2",
    "normalization",
]

SQRT2 = math.sqrt(2.0)


def _check_theta(theta: float) -> None:
    if not (0.0 <= theta < 1.0) or not math.isfinite(theta):
        raise ValueError(f"thermal ratio must lie in [0, 1), got {theta!r}")


@dataclass(frozen=True)
class TwoPhotonCoefficients:
    """Unnormalized ``N = 2`` density-matrix coefficients.

    ``upsilon1`` multiplies ``|11><20|`` and ``upsilon2`` multiplies
    ``|11><02|``, ``xi`` multiplies ``|20><02|`` (Fock labels ``|n1 n2>``).
    """

    c_norm: float
    lambda1: float
    lambda2: float
    omega: float
    upsilon1: complex
    upsilon2: complex
    xi: complex


@dataclass(frozen=True)
class PPTReport:
    """PPT verdict. ``eigenvalues`` come from the exact partial transpose of the
    physical matrix and ``printed_eigenvalues`` from the closed-form one."""

    eigenvalues: tuple[float, float, float, float]
    separable_in_n2: bool
    isolated_eigenvalue: float | None
    trace: float
    printed_eigenvalues: tuple[float, float, float, float] = ()


def _lam(x: float, t: float) -> float:
    return 0.5 * (x * x * (1 + t) ** 4 + 4 * x * t * (1 + t) ** 2 + 2 * t * t)


def _ups(bj_bar: complex, bk: complex, tj: float, tk: float, xj: float) -> complex:
    return bj_bar * bk / SQRT2 * (1 + tj) * (1 + tk) * (xj * (1 + tj) ** 2 + 2 * tj)


def normalization(beta1: complex, beta2: complex, theta1: float, theta2: float) -> float:
    """Overall factor ``C = (1 - T1)(1 - T2) exp(|b1|^2 (T1 - 1) + |b2|^2 (T2 - 1))``."""
    x1, x2 = abs(beta1) ** 2, abs(beta2) ** 2
    return (1 - theta1) * (1 - theta2) * math.exp(x1 * (theta1 - 1) + x2 * (theta2 - 1))


def two_photon_coefficients(beta1: complex, beta2: complex, theta1: float, theta2: float) -> TwoPhotonCoefficients:
    _check_theta(theta1)
    _check_theta(theta2)
    b1, b2 = complex(beta1), complex(beta2)
    if not (np.isfinite(b1) and np.isfinite(b2)):
        raise ValueError("displacements must be finite")
    x1, x2 = abs(b1) ** 2, abs(b2) ** 2
    return TwoPhotonCoefficients(
        c_norm=normalization(b1, b2, theta1, theta2),
        lambda1=_lam(x1, theta1),
        lambda2=_lam(x2, theta2),
        omega=(x1 * (1 + theta1) ** 2 + theta1) * (x2 * (1 + theta2) ** 2 + theta2),
        upsilon1=_ups(b1.conjugate(), b2, theta1, theta2, x1),
        # mode-swapped partner of upsilon1
        upsilon2=_ups(b2.conjugate(), b1, theta2, theta1, x2),
        xi=b1**2 * b2.conjugate() ** 2 * (1 + theta1) ** 2 * (1 + theta2) ** 2 / 2,
    )


def single_particle_matrix(c: TwoPhotonCoefficients, layout: str = "physical") -> np.ndarray:
    """4x4 density matrix (unnormalized) in the single-particle basis.

    ``layout="physical"`` places ``conj(upsilon1)`` in the first row, which
    is where the thermal sum over displaced Fock kets puts it.
    ``layout="printed"`` places ``upsilon1`` there instead. The two agree
    whenever ``upsilon1`` is real, in particular in the symmetric case.
    """
    if layout == "physical":
        u1 = np.conj(c.upsilon1) / SQRT2
    elif layout == "printed":
        u1 = c.upsilon1 / SQRT2
    else:
        raise ValueError(f"unknown layout {layout!r}")
    u2 = c.upsilon2 / SQRT2
    h = c.omega / 2
    return np.array([
        [c.lambda1, u1, u1, c.xi],
        [np.conj(u1), h, h, u2],
        [np.conj(u1), h, h, u2],
        [np.conj(c.xi), np.conj(u2), np.conj(u2), c.lambda2],
    ], dtype=complex)


def partial_transpose(m: np.ndarray) -> np.ndarray:
    """Transpose on the second particle of a 2x2-particle operator."""
    return np.asarray(m).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def printed_partial_transpose(c: TwoPhotonCoefficients) -> np.ndarray:
    """Closed-form partial transpose in the basis (|11>, sym, |22>, antisym).

    Exact when ``upsilon1``, ``upsilon2`` and ``xi`` are real (which covers
    the symmetric case). Otherwise it drops the imaginary part of ``xi``
    and mixes conjugation conventions, so its spectrum is only indicative.
    """
    u1, u2, xi, h = c.upsilon1, c.upsilon2, c.xi, c.omega / 2
    re = lambda z: (z + np.conj(z)) / 2  # noqa: E731
    return np.array([
        [c.lambda1, re(u1), h, (np.conj(u1) - u1) / 2],
        [re(u1), h + re(xi), re(u2), 0],
        [h, re(u2), c.lambda2, (np.conj(u2) - u2) / 2],
        [(u1 - np.conj(u1)) / 2, 0, (u2 - np.conj(u2)) / 2, h - re(xi)],
    ], dtype=complex)


def partial_transpose_spectrum(c: TwoPhotonCoefficients, tol: float = 1e-12) -> PPTReport:
    """Eigenvalues of the partial transpose and the PPT verdict.

    ``separable_in_n2`` is true when the smallest eigenvalue is at least
    ``-tol * trace``. In the symmetric case (equal ``lambda``, equal real
    ``upsilon``, real ``xi``) the eigenvalue ``omega/2 - xi`` decouples and is
    reported as ``isolated_eigenvalue``.
    """
    m = single_particle_matrix(c)
    trace = float(np.trace(m).real)
    ev = np.linalg.eigvalsh(partial_transpose(m))
    symmetric = _is_symmetric(c)
    iso = float(c.omega / 2 - c.xi.real) if symmetric else None
    printed = np.linalg.eigvalsh(printed_partial_transpose(c))
    return PPTReport(
        eigenvalues=tuple(float(x) for x in ev),
        separable_in_n2=bool(ev[0] >= -tol * max(trace, np.finfo(float).tiny)),
        isolated_eigenvalue=iso,
        trace=trace,
        printed_eigenvalues=tuple(float(x) for x in printed),
    )


def _is_symmetric(c: TwoPhotonCoefficients, rtol: float = 1e-12) -> bool:
    scale = max(abs(c.lambda1), abs(c.omega), 1e-300)
    return (
        abs(c.lambda1 - c.lambda2) <= rtol * scale
        and abs(c.upsilon1 - c.upsilon2) <= rtol * scale
        and abs(c.upsilon1.imag) <= rtol * scale
        and abs(c.xi.imag) <= rtol * scale
    )


def symmetric_identities(c: TwoPhotonCoefficients, form: str = "corrected") -> dict[str, tuple[float, float]]:
    """Symmetric functions of the three coupled eigenvalues vs their closed forms.

    Returns ``{name: (from_spectrum, closed_form)}`` for ``sum``, ``pairs``
    and ``product``. ``form="corrected"`` (the default) holds exactly.
    ``form="printed"`` is a variant with ``-2 Lambda^2`` in place of
    ``-2 Upsilon^2`` in the pair sum and ``Lambda^2 (Omega - 2 Lambda)`` in
    place of ``Upsilon^2 (Omega - 2 Lambda)`` in the expanded product. It does
    not hold and is kept only to show the difference.
    """
    if not _is_symmetric(c):
        raise ValueError("identities only apply to the symmetric case")
    lam, ups, xi, om = c.lambda1, c.upsilon1.real, c.xi.real, c.omega
    block = np.array([[lam, ups, om / 2], [ups, om / 2 + xi, ups], [om / 2, ups, lam]])
    y = np.linalg.eigvalsh(block)
    e1 = float(y.sum())
    e2 = float(y[0] * y[1] + y[1] * y[2] + y[0] * y[2])
    e3 = float(np.prod(y))
    if form == "printed":
        pairs = lam**2 - om**2 / 4 + 2 * (xi + om / 2) * lam - 2 * lam**2
        product = lam**2 * (om - 2 * lam) + (xi + om / 2) * (lam**2 - om**2 / 4)
    elif form == "corrected":
        pairs = lam**2 - om**2 / 4 + 2 * (xi + om / 2) * lam - 2 * ups**2
        product = (lam - om / 2) * ((xi + om / 2) * (lam + om / 2) - 2 * ups**2)
    else:
        raise ValueError(f"unknown form {form!r}")
    return {
        "sum": (e1, 2 * lam + xi + om / 2),
        "pairs": (e2, float(pairs)),
        "product": (e3, float(product)),
    }


def identity_residuals(c: TwoPhotonCoefficients, form: str = "corrected") -> dict[str, float]:
    """Relative residuals of :func:`symmetric_identities`.

    Each identity is homogeneous of degree k = 1, 2, 3 in the coefficients,
    so its residual is scaled by ``(y1 + y2 + y3)^k``. This stays meaningful
    for pure states, where the pair sum and the product vanish.
    """
    ids = symmetric_identities(c, form)
    scale = abs(ids["sum"][0])
    if scale == 0.0:
        return {k: abs(a - b) for k, (a, b) in ids.items()}
    return {k: abs(a - b) / scale**deg for deg, (k, (a, b)) in enumerate(ids.items(), 1)}


def _log_fact(n):
    return gammaln(np.asarray(n, dtype=float) + 1)


def _printed_amps(beta: complex, count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(<0|, <1|, <2|)`` components of the printed displaced Fock kets for p < count.

    The overall ``exp(-|beta|^2/2)`` is left out. The ``|beta|^-2`` factors
    are multiplied out so that ``beta = 0`` is handled.
    """
    p = np.arange(count)
    bb = np.conj(beta)
    with np.errstate(divide="ignore", invalid="ignore"):
        root = np.exp(-0.5 * _log_fact(p))
    pw = lambda k: np.where(p - k >= 0, bb ** np.maximum(p - k, 0), 0.0)  # noqa: E731
    amp0 = pw(0) * root
    amp1 = (pw(0) * beta + p * pw(1)) * root
    amp2 = (pw(0) * beta**2 + 2 * p * pw(1) * beta + p * (p - 1) * pw(2)) * root / SQRT2
    return amp0, amp1, amp2


def _exact_amps(beta: complex, count: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``<m|D(beta)|p>`` for ``m = 0, 1, 2`` without the ``exp(-|beta|^2/2)`` factor."""
    p = np.arange(count)
    x = abs(beta) ** 2
    out = []
    for m in range(3):
        amp = np.empty(count, dtype=complex)
        for k in p:
            if m >= k:
                lf = 0.5 * (_log_fact(k) - _log_fact(m))
                amp[k] = np.exp(lf) * beta ** (m - k) * eval_genlaguerre(k, m - k, x)
            else:
                lf = 0.5 * (_log_fact(m) - _log_fact(k))
                amp[k] = np.exp(lf) * (-np.conj(beta)) ** (k - m) * eval_genlaguerre(m, k - m, x)
        out.append(amp)
    return tuple(out)


def displaced_fock_oracle_n2(
    beta1: complex,
    beta2: complex,
    theta1: float,
    theta2: float,
    p_max: int = 40,
    q_max: int = 40,
    amplitudes: str = "printed",
) -> np.ndarray:
    """Rebuild the ``N = 2`` block by summing displaced Fock projectors.

    Returns the 4x4 single-particle matrix with the overall factor ``C``
    divided out, so it is directly comparable with
    :func:`single_particle_matrix`. Sums run over ``p < p_max``, ``q < q_max``.
    """
    _check_theta(theta1)
    _check_theta(theta2)
    for t, n in ((theta1, p_max), (theta2, q_max)):
        if t > 0 and t**n >= 1e-12:
            raise ValueError(f"truncation too short: Theta^{n} = {t**n:.3g} >= 1e-12")
    make = {"printed": _printed_amps, "exact": _exact_amps}.get(amplitudes)
    if make is None:
        raise ValueError(f"unknown amplitudes {amplitudes!r}")
    a0, a1, a2 = make(complex(beta1), p_max)
    b0, b1, b2 = make(complex(beta2), q_max)
    w1 = theta1 ** np.arange(p_max) if theta1 > 0 else (np.arange(p_max) == 0).astype(float)
    w2 = theta2 ** np.arange(q_max) if theta2 > 0 else (np.arange(q_max) == 0).astype(float)
    # Fock components |20>, |11>, |02> of each |beta1 p>|beta2 q>
    kets = np.stack([
        a2[:, None] * b0[None, :],
        a1[:, None] * b1[None, :],
        a0[:, None] * b2[None, :],
    ])
    weights = w1[:, None] * w2[None, :]
    fock = np.einsum("ipq,jpq,pq->ij", kets, kets.conj(), weights)
    x1, x2 = abs(beta1) ** 2, abs(beta2) ** 2
    # thermal weights are (1-T) T^p; C collects them with the Gaussian factors
    fock *= (1 - theta1) * (1 - theta2) * math.exp(-(x1 + x2)) / normalization(beta1, beta2, theta1, theta2)
    # |20> -> |11>_sp, |02> -> |22>_sp, |11> -> (|12> + |21>)/sqrt(2)
    iso = np.zeros((4, 3), dtype=complex)
    iso[0, 0] = 1.0
    iso[1, 1] = iso[2, 1] = 1 / SQRT2
    iso[3, 2] = 1.0
    return iso @ fock @ iso.conj().T
