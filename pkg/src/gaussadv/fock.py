"""Brute-force Fock-space oracle for the closed-form Gaussian results.

Thermal occupation. A mode with symplectic eigenvalue ``nu = coth(hw/2kT)``
has Boltzmann ratio ``Theta = exp(-hw/kT)``. From
``coth(x/2) = (1 + e^{-x})/(1 - e^{-x})`` one gets
``Theta = (nu - 1)/(nu + 1)``, with populations ``(1 - Theta) Theta^n``.
Only ``Theta`` enters, so no absolute units are needed.

Construction. The state is ``D(gamma) U S1(r1) S2(r2) rho_th rho_th
S^dag U^dag D^dag`` with the passive part ``U = R1 R2 B R_as``. The
displacement is moved inside (``D(gamma) U = U D(gamma')`` with
``gamma' = T^dag gamma``, ``T`` the one-photon block of ``U``). The two
single-mode states ``D(gamma'_k) S_k rho_th S_k^dag D^dag`` are built by
dense matrix exponentials in a generous working dimension, then truncated
to total photon number ``N < d``. Since ``U`` conserves ``N`` it is applied
exactly, one ``N``-sector at a time. The weight lost to the truncation is
the leakage.

Operator conventions: ``R_k(phi) = exp(-i phi n_k)``,
``B(theta) = exp(-i theta G)`` and ``S_k(r) = exp(r/2 (a_k^2 - a_k^dag^2))``,
where the beam-splitter generator is ``G = i(a1^dag a2 - a1 a2^dag)``.
Together these reproduce the phase-space matrices used in
:mod:`gaussadv.gaussian`. The phase channel is ``exp(-i x G)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.linalg import eigh, expm

from .advantage import OneModeParams
from .gaussian import IsotropicGaussianParams

__all__ = [
    "CutoffExhaustedError",
    "UnconvergedStateError",
    "FockState",
    "thermal_ratio",
    "fock_build",
    "fock_qfi_jy",
    "fock_mean_photon",
    "fock_purity",
    "cutoff_search",
    "one_mode_fock_qfi",
    "spectral_qfi",
]

DEFAULT_LEAKAGE_CAP = 1e-8
EIG_FLOOR = 1e-12


class CutoffExhaustedError(RuntimeError):
    """No cutoff up to the allowed maximum reaches the requested leakage."""


class UnconvergedStateError(RuntimeError):
    """The truncated state lost more weight than allowed."""


def thermal_ratio(nu: float) -> float:
    return (nu - 1.0) / (nu + 1.0)


@lru_cache(maxsize=8)
def _ladder(dim: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    a.setflags(write=False)
    return a


def _single_mode(nu: float, r: float, beta: complex, phi: float, dim: int) -> np.ndarray:
    """``D(beta) R(phi) S(r) rho_th(nu) (...)^dag`` in a ``dim``-level truncation."""
    a = _ladder(dim)
    theta = thermal_ratio(nu)
    n = np.arange(dim)
    weights = (1.0 - theta) * theta**n if theta > 0 else (n == 0).astype(float)
    rho = np.diag(weights).astype(complex)
    if r != 0.0:
        s = expm(0.5 * r * (a @ a - a.T @ a.T))
        rho = s @ rho @ s.conj().T
    if phi != 0.0:
        ph = np.exp(-1j * phi * n)
        rho = ph[:, None] * rho * ph.conj()[None, :]
    if beta != 0:
        disp = expm(beta * a.T - np.conj(beta) * a)
        rho = disp @ rho @ disp.conj().T
    return rho


def _working_dim(d: int) -> int:
    return 2 * d + 24


def _mode_mean(nu: float, r: float, beta: complex) -> float:
    return 0.5 * (nu * math.cosh(2 * r) - 1.0) + abs(beta) ** 2


def _representable(rho: np.ndarray, nu: float, r: float, beta: complex, rtol: float = 1e-6) -> bool:
    """False when the working space is too small to hold the single-mode state.

    Truncated exponentials stay unitary, so the trace cannot reveal this;
    the mean photon number can.
    """
    n = np.arange(rho.shape[0])
    mean = float(np.real(np.diagonal(rho)) @ n)
    exact = _mode_mean(nu, r, beta)
    return abs(mean - exact) <= rtol * max(1.0, exact)


@lru_cache(maxsize=16)
def _triangle(d: int) -> tuple[np.ndarray, tuple[slice, ...]]:
    """Basis ``(n1, n2)`` with ``n1 + n2 < d`` grouped by total ``N`` (and ``n2`` within)."""
    basis = [(big - k, k) for big in range(d) for k in range(big + 1)]
    sectors = []
    start = 0
    for big in range(d):
        sectors.append(slice(start, start + big + 1))
        start += big + 1
    arr = np.array(basis, dtype=int)
    arr.setflags(write=False)
    return arr, tuple(sectors)


def _generator_sector(big: int) -> np.ndarray:
    """``G = i(a1^dag a2 - a1 a2^dag)`` on the sector with ``N`` photons (basis index ``n2``)."""
    g = np.zeros((big + 1, big + 1), dtype=complex)
    for k in range(1, big + 1):
        # a1^dag a2 |N-k, k> = sqrt((N-k+1) k) |N-k+1, k-1>
        amp = math.sqrt((big - k + 1) * k)
        g[k - 1, k] = 1j * amp
        g[k, k - 1] = -1j * amp
    return g


def _passive_sector(big: int, params: IsotropicGaussianParams) -> np.ndarray:
    k = np.arange(big + 1)
    n1, n2 = big - k, k
    g = _generator_sector(big)
    w, v = np.linalg.eigh(g)
    bs = (v * np.exp(-1j * params.theta * w)) @ v.conj().T
    left = np.exp(-1j * (params.phi_1 * n1 + params.phi_2 * n2))
    right = np.exp(-1j * params.psi * (n1 - n2))
    return left[:, None] * bs * right[None, :]


@dataclass(frozen=True)
class FockState:
    """Two-mode density matrix on the truncated space ``n1 + n2 < d``.

    ``rho`` is expressed in the basis ``basis`` (rows ``(n1, n2)``), which is
    the part of the ``d x d`` two-mode box that a total photon cutoff keeps.
    :meth:`full` embeds it into the ``d^2 x d^2`` box.
    """

    rho: np.ndarray
    basis: np.ndarray
    d: int
    leakage: float
    converged: bool

    def full(self) -> np.ndarray:
        idx = self.basis[:, 0] * self.d + self.basis[:, 1]
        out = np.zeros((self.d**2, self.d**2), dtype=complex)
        out[np.ix_(idx, idx)] = self.rho
        return out

    @property
    def sectors(self) -> tuple[slice, ...]:
        return _triangle(self.d)[1]


def fock_build(
    params: IsotropicGaussianParams, d: int, leakage_cap: float = DEFAULT_LEAKAGE_CAP
) -> FockState:
    """Density matrix of the Gaussian state, truncated to ``n1 + n2 < d``."""
    if d < 2:
        raise ValueError("cutoff d must be >= 2")
    basis, sectors = _triangle(d)
    dim = _working_dim(d)
    units = [_passive_sector(big, params) for big in range(d)]
    one_photon = units[1]  # basis (|1,0>, |0,1>)
    gamma_in = one_photon.conj().T @ params.gamma
    full_a = _single_mode(params.nu, params.r_1, complex(gamma_in[0]), 0.0, dim)
    full_b = _single_mode(params.nu, params.r_2, complex(gamma_in[1]), 0.0, dim)
    ok = _representable(full_a, params.nu, params.r_1, gamma_in[0]) and _representable(
        full_b, params.nu, params.r_2, gamma_in[1])
    rho_a, rho_b = full_a[:d, :d], full_b[:d, :d]
    n1, n2 = basis[:, 0], basis[:, 1]
    rho = rho_a[np.ix_(n1, n1)] * rho_b[np.ix_(n2, n2)]
    for sl, u in zip(sectors, units):
        rho[sl, :] = u @ rho[sl, :]
    for sl, u in zip(sectors, units):
        rho[:, sl] = rho[:, sl] @ u.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    trace = float(np.trace(rho).real)
    leakage = max(0.0, 1.0 - trace) if ok else 1.0
    rho /= trace
    rho.setflags(write=False)
    return FockState(rho, basis, d, leakage, leakage <= leakage_cap)


def spectral_qfi(rho: np.ndarray, generator, floor: float = EIG_FLOOR) -> float:
    """``2 sum (p_i - p_j)^2/(p_i + p_j) |<i|G|j>|^2`` over pairs with ``p_i + p_j > floor``."""
    # the relatively robust representation driver is markedly faster here
    p, v = eigh(rho, driver="evr")
    g = v.conj().T @ (generator @ v)
    tot = p[:, None] + p[None, :]
    mask = tot > floor
    diff2 = (p[:, None] - p[None, :]) ** 2
    return float(2.0 * np.sum(diff2[mask] / tot[mask] * np.abs(g[mask]) ** 2))


def _require_converged(state: FockState) -> None:
    if not state.converged:
        raise UnconvergedStateError(
            f"leakage {state.leakage:.3g} exceeds the cap at cutoff d={state.d}"
        )


def fock_qfi_jy(state: FockState, floor: float = EIG_FLOOR) -> float:
    """Spectral QFI of ``exp(-i x G)`` with ``G = i(a1^dag a2 - a1 a2^dag)``."""
    _require_converged(state)
    gen = sparse.block_diag([_generator_sector(big) for big in range(state.d)], format="csr")
    return spectral_qfi(state.rho, gen, floor)


def fock_mean_photon(state: FockState) -> float:
    _require_converged(state)
    total = state.basis.sum(axis=1)
    return float(np.real(np.diagonal(state.rho)) @ total)


def fock_purity(state: FockState) -> float:
    _require_converged(state)
    return float(np.sum(np.abs(state.rho) ** 2))


def cutoff_search(
    params: IsotropicGaussianParams, target_leakage: float = DEFAULT_LEAKAGE_CAP, d_max: int = 64
) -> int:
    """Smallest cutoff ``d`` (>= 2) whose truncation loses less than ``target_leakage``.

    The passive part conserves the total photon number, so the lost weight
    follows from the photon distributions of the two single-mode factors.
    """
    if not (0.0 < target_leakage <= 1e-2):
        raise ValueError("target_leakage must lie in (0, 1e-2]")
    dim = _working_dim(d_max)
    one_photon = _passive_sector(1, params)
    gamma_in = one_photon.conj().T @ params.gamma
    modes = [(params.r_1, complex(gamma_in[0])), (params.r_2, complex(gamma_in[1]))]
    if sum(_mode_mean(params.nu, r, b) for r, b in modes) >= d_max:
        raise CutoffExhaustedError(f"mean photon number exceeds d_max={d_max}")
    rhos = [_single_mode(params.nu, r, b, 0.0, dim) for r, b in modes]
    if not all(_representable(rho, params.nu, r, b) for rho, (r, b) in zip(rhos, modes)):
        raise CutoffExhaustedError(f"state does not fit the working space of d_max={d_max}")
    p_a, p_b = (np.real(np.diagonal(rho)) for rho in rhos)
    # distribution of the total photon number, truncated at d_max
    p_tot = np.convolve(p_a[:d_max], p_b[:d_max])[:d_max]
    kept = np.cumsum(p_tot)
    for d in range(2, d_max + 1):
        if 1.0 - kept[d - 1] <= target_leakage:
            return d
    raise CutoffExhaustedError(
        f"leakage {1.0 - kept[-1]:.3g} still above {target_leakage:g} at d_max={d_max}"
    )


def one_mode_fock_qfi(p: OneModeParams, d: int = 80, leakage_cap: float = DEFAULT_LEAKAGE_CAP) -> float:
    """Spectral QFI of ``exp(-i x n)`` for a single-mode state, by brute force."""
    beta = p.gamma_abs * np.exp(1j * p.phi_d)
    full = _single_mode(p.nu, p.r, beta, p.phi, _working_dim(d))
    rho = full[:d, :d]
    trace = float(np.trace(rho).real)
    if 1.0 - trace > leakage_cap or not _representable(full, p.nu, p.r, beta):
        raise UnconvergedStateError(f"one-mode leakage {1.0 - trace:.3g} at d={d}")
    rho = rho / trace
    return spectral_qfi(0.5 * (rho + rho.conj().T), np.diag(np.arange(d, dtype=complex)))
