"""Metrological advantage over the finite-temperature reference.

Besides the PLO-optimized advantage of general states this module holds the
closed forms for a single displaced squeezed mode next to a thermal mode
(``SpecialFamilyParams``), the one-mode interferometer, the ancilla
displacement map and the FTQL-normalized advantage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import IsotropicGaussianParams, displacement_angles
from .plo import optimize_qfi
from .qfi import ftql

__all__ = [
    "DB_CONVENTION",
    "OneModeParams",
    "SpecialFamilyParams",
    "GAP_FLOOR",
    "clean_gap",
    "db_to_r",
    "r_to_db",
    "metrological_advantage",
    "special_family_qfi",
    "special_family_qfi_opt",
    "special_family_ftql",
    "special_family_gap",
    "one_mode_qfi",
    "one_mode_ftql",
    "one_mode_witness_threshold",
    "ancilla_displace",
    "ancilla_witness_gap",
    "renormalized_advantage",
]

DB_CONVENTION = "dB = 10*log10(exp(2r)), i.e. r = ln(10)*dB/20"
# optimizer round-off below this (relative to max(1, FTQL)) is not an advantage
GAP_FLOOR = 1e-12


def clean_gap(gap: float, ref: float) -> float:
    return 0.0 if abs(gap) <= GAP_FLOOR * max(1.0, ref) else gap


def db_to_r(db: float) -> float:
    return math.log(10.0) * db / 20.0


def r_to_db(r: float) -> float:
    return 20.0 * r / math.log(10.0)


def _f(nu: float) -> float:
    return 1.0 / (1.0 + 1.0 / (nu * nu))


def _check_common(nu: float, gamma_abs: float) -> None:
    if not (math.isfinite(nu) and math.isfinite(gamma_abs)):
        raise ValueError("parameters must be finite")
    if nu < 1.0:
        raise ValueError(f"nu must be >= 1, got {nu}")
    if gamma_abs < 0.0:
        raise ValueError(f"gamma_abs must be >= 0, got {gamma_abs}")


@dataclass(frozen=True)
class OneModeParams:
    """Single-mode state ``D(gamma) R(phi) S(r)`` applied to a thermal state."""

    nu: float = 1.0
    gamma_abs: float = 0.0
    phi: float = 0.0
    phi_d: float = 0.0
    r: float = 0.0

    def __post_init__(self) -> None:
        _check_common(self.nu, self.gamma_abs)
        if self.r < 0.0:
            # S(-r) = R(pi/2) S(r) R(-pi/2)
            object.__setattr__(self, "r", -self.r)
            object.__setattr__(self, "phi", self.phi + math.pi / 2)

    @property
    def phi_tilde(self) -> float:
        return self.phi_d + self.phi


@dataclass(frozen=True)
class SpecialFamilyParams:
    """Displaced squeezed mode 1 next to thermal mode 2 (``theta = psi = alpha = r_2 = 0``).

    ``phi_tilde = phi_d + phi_1`` is the angle between displacement and
    squeezing: 0 means they are aligned, ``pi/2`` orthogonal.
    """

    nu: float = 1.0
    gamma_abs: float = 0.0
    r1: float = 0.0
    phi_tilde: float = 0.0

    def __post_init__(self) -> None:
        _check_common(self.nu, self.gamma_abs)
        if self.r1 < 0.0:
            raise ValueError("r1 must be >= 0")

    def embed(self, phi_1: float = 0.0, phi_2: float = 0.0) -> IsotropicGaussianParams:
        """Full parameter set of the family member."""
        return IsotropicGaussianParams(
            nu=self.nu, gamma_abs=self.gamma_abs, alpha=0.0,
            phi_d1=self.phi_tilde - phi_1, phi_d2=0.0,
            phi_1=phi_1, phi_2=phi_2, r_1=self.r1,
        )

    @property
    def v(self) -> float:
        """Displacement-squeezing bracket ``e^{2r} sin^2 + e^{-2r} cos^2 - 1``."""
        s, c = math.sin(self.phi_tilde), math.cos(self.phi_tilde)
        return math.expm1(2 * self.r1) * s * s + math.expm1(-2 * self.r1) * c * c


def metrological_advantage(params: IsotropicGaussianParams) -> float:
    """``max(I_F^opt - FTQL, 0)`` with the optimum found numerically over PLOs."""
    ref = ftql(params)
    return max(clean_gap(optimize_qfi(params).i_f_opt - ref, ref), 0.0)


def _squeeze_excess(nu: float, r: float) -> float:
    # 4 f (sinh^2 2r - 2 sinh^2 r) = 8 f sinh^2 r cosh 2r, always >= 0
    return 8 * _f(nu) * math.sinh(r) ** 2 * math.cosh(2 * r)


def special_family_qfi(p: SpecialFamilyParams, a: float, b: float) -> float:
    """QFI after the PLO ``R_as(a) B(b) R_as(c)``; independent of ``c``."""
    s = (math.sin(2 * b) * math.sin(2 * a)) ** 2
    base = 8 * _f(p.nu) * math.sinh(p.r1) ** 2 + 4 * p.gamma_abs**2 / p.nu
    return base + s * (_squeeze_excess(p.nu, p.r1) + 4 * p.gamma_abs**2 / p.nu * p.v)


def special_family_qfi_opt(p: SpecialFamilyParams) -> tuple[float, int]:
    """Optimal QFI and regime (1, 2 or 3).

    Regimes 1 and 2 are optimized by ``a = b = pi/4``; regime 3 (displacement
    roughly along the squeezed quadrature and large) by ``a = b = 0``.
    """
    v = p.v
    disp = 4 * p.gamma_abs**2 / p.nu
    excess = _squeeze_excess(p.nu, p.r1)
    quarter = 4 * _f(p.nu) * math.sinh(2 * p.r1) ** 2 + disp * (v + 1)
    direct = 8 * _f(p.nu) * math.sinh(p.r1) ** 2 + disp
    if v >= 0:
        return quarter, 1
    if -disp * v < excess:
        return quarter, 2
    return direct, 3


def special_family_ftql(p: SpecialFamilyParams) -> float:
    return 4 * p.gamma_abs**2 / p.nu + 4 * math.sinh(p.r1) ** 2


def special_family_gap(p: SpecialFamilyParams) -> tuple[float, int]:
    """``I_F^opt - FTQL`` for the family, computed without cancellation."""
    disp = 4 * p.gamma_abs**2 / p.nu
    s2 = math.sinh(p.r1) ** 2
    # 8 f - 4 = 4 (nu^2 - 1)/(nu^2 + 1)
    g = (p.nu**2 - 1) / (p.nu**2 + 1)
    direct_gap = 4 * g * s2
    _, regime = special_family_qfi_opt(p)
    if regime == 3:
        return direct_gap, 3
    return direct_gap + _squeeze_excess(p.nu, p.r1) + disp * p.v, regime


def one_mode_qfi(p: OneModeParams, variant: str = "squared") -> float:
    """QFI of single-mode phase estimation (phase shifts are the only control).

    ``variant="squared"`` uses ``e^{2r} sin^2(phi~) + e^{-2r} cos^2(phi~)`` for
    the displacement factor, which reduces to the displaced-thermal value at
    ``r = 0`` and agrees with a brute-force Fock computation.
    ``variant="printed"`` uses the unsquared ``e^{2r} cos(phi~) + e^{-2r} sin(phi~)``
    kept for comparison.
    """
    t = p.phi_tilde
    if variant == "squared":
        factor = math.exp(2 * p.r) * math.sin(t) ** 2 + math.exp(-2 * p.r) * math.cos(t) ** 2
    elif variant == "printed":
        factor = math.exp(2 * p.r) * math.cos(t) + math.exp(-2 * p.r) * math.sin(t)
    else:
        raise ValueError(f"unknown variant {variant!r}; expected 'squared' or 'printed'")
    return 4 * _f(p.nu) * math.sinh(2 * p.r) ** 2 + 4 * p.gamma_abs**2 / p.nu * factor


def one_mode_ftql(p: OneModeParams) -> float:
    """QFI of the one-mode displaced thermal state with the same ``<n>`` and ``nu``.

    A single thermal mode holds ``(nu - 1)/2`` photons, so this is
    ``4(<n> - (nu - 1)/2)/nu``.
    """
    return 4 * math.sinh(p.r) ** 2 + 4 * p.gamma_abs**2 / p.nu


def one_mode_witness_threshold(nu: float, r: float, form: str = "printed") -> float:
    """Value of ``4|gamma|^2/nu`` beyond which the one-mode QFI falls below the reference.

    Applies to displacement along the squeezed quadrature. ``form="exact"``
    is the root of ``one_mode_qfi - one_mode_ftql``:
    ``(4 f sinh^2(2r) - 4 sinh^2 r) / (1 - e^{-2r})``. ``form="printed"``
    has ``2 sinh^2 r`` in place of ``4 sinh^2 r``. It is larger, so it is a
    sufficient condition but not the boundary.
    """
    if r <= 0:
        raise ValueError("r must be > 0")
    k = {"printed": 2, "exact": 4}.get(form)
    if k is None:
        raise ValueError(f"unknown form {form!r}")
    return (4 * _f(nu) * math.sinh(2 * r) ** 2 - k * math.sinh(r) ** 2) / (-math.expm1(-2 * r))


def ancilla_displace(params: IsotropicGaussianParams, delta_gamma) -> IsotropicGaussianParams:
    """Shift the displacement by ``delta_gamma`` keeping the covariance matrix.

    This is the limit of mixing a strong coherent ancilla into the state
    through a weakly transmitting beam splitter and discarding it.
    """
    dg = np.asarray(delta_gamma, dtype=complex).reshape(2)
    if not np.all(np.isfinite(dg)):
        raise ValueError("delta_gamma must be finite")
    if not np.any(dg):
        return params
    gamma_abs, alpha, phi_d1, phi_d2 = displacement_angles(params.gamma + dg)
    return params.replace(gamma_abs=gamma_abs, alpha=alpha, phi_d1=phi_d1, phi_d2=phi_d2)


def ancilla_witness_gap(r1: float, gamma_abs: float) -> float:
    """Optimized gap of the pure orthogonal displaced-squeezed witness state."""
    return 2 * (math.sinh(2 * r1) ** 2 - 2 * math.sinh(r1) ** 2) + 4 * gamma_abs**2 * math.expm1(2 * r1)


def renormalized_advantage(params: IsotropicGaussianParams) -> float:
    """``(I_F^opt - FTQL) / FTQL``."""
    ref = ftql(params)
    if ref <= 0.0:
        raise ZeroDivisionError("the FTQL vanishes (vacuum input); the normalized advantage is undefined")
    return clean_gap(optimize_qfi(params).i_f_opt - ref, ref) / ref
