"""Isotropic two-mode Gaussian states in parameter form and phase-space form.

Phase-space conventions: the mode vector is ``A = (a1, a2, a1^dag, a2^dag)``,
the covariance matrix is ``sigma_ij = <{dA_i, dA_j^dag}>`` (vacuum is the
identity) and the displacement is ``d = <A> = (gamma, conj(gamma))``.
A symplectic matrix ``S`` satisfies ``S K S^dag = K`` with
``K = diag(1, 1, -1, -1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

__all__ = [
    "K",
    "TWO_PI",
    "NonPhysicalStateError",
    "AnisotropicStateError",
    "IsotropicGaussianParams",
    "PhaseSpaceState",
    "SymplecticMatrix",
    "symplectic_factory",
    "passive_block",
    "build_state",
    "symplectic_eigenvalues",
    "mean_photon_number",
    "purity",
    "apply_symplectic",
    "extract_params",
    "passive_angles",
    "passive_angles_array",
    "gamma_vector",
    "displacement_angles",
]

K = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
TWO_PI = 2.0 * math.pi

HERMITIAN_TOL = 1e-10
SYMPLECTIC_TOL = 1e-10
ISOTROPY_TOL = 1e-8


class NonPhysicalStateError(ValueError):
    """Covariance matrix violates the uncertainty principle."""


class AnisotropicStateError(ValueError):
    """The two symplectic eigenvalues differ."""


def _wrap(angle: float) -> float:
    x = float(angle) % TWO_PI
    # float modulo can round a tiny negative number up to exactly 2*pi
    return 0.0 if x >= TWO_PI else x


_ANGLES = ("alpha", "phi_d1", "phi_d2", "phi_1", "phi_2", "theta", "psi")


@dataclass(frozen=True)
class IsotropicGaussianParams:
    """The 11 real numbers describing an isotropic two-mode Gaussian state.

    The state is ``D(gamma) R1(phi_1) R2(phi_2) B(theta) R_as(psi) S1(r_1)
    S2(r_2)`` applied to a product of two thermal states with symplectic
    eigenvalue ``nu``, where
    ``gamma = gamma_abs * (e^{i phi_d1} cos(alpha), e^{i phi_d2} sin(alpha))``.

    Angles are reduced to ``[0, 2 pi)``. Negative squeezing parameters are
    accepted and canonicalized to ``r >= 0`` by absorbing the sign into
    ``phi_1``, ``phi_2`` and ``psi`` (the resulting state is identical).
    """

    nu: float = 1.0
    gamma_abs: float = 0.0
    alpha: float = 0.0
    phi_d1: float = 0.0
    phi_d2: float = 0.0
    phi_1: float = 0.0
    phi_2: float = 0.0
    theta: float = 0.0
    psi: float = 0.0
    r_1: float = 0.0
    r_2: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v!r}")
            object.__setattr__(self, f.name, v)
        if self.nu < 1.0:
            raise ValueError(f"nu must be >= 1, got {self.nu}")
        if self.gamma_abs < 0.0:
            raise ValueError(f"gamma_abs must be >= 0, got {self.gamma_abs}")
        # S_k(-r) = R_k(pi/2) S_k(r) R_k(-pi/2); the trailing rotation is
        # absorbed by the thermal state and R_1(pi/2) = R_glob(pi/4) R_as(pi/4)
        shift = 0.0
        dpsi = 0.0
        if self.r_1 < 0.0:
            object.__setattr__(self, "r_1", -self.r_1)
            shift += math.pi / 4
            dpsi += math.pi / 4
        if self.r_2 < 0.0:
            object.__setattr__(self, "r_2", -self.r_2)
            shift += math.pi / 4
            dpsi -= math.pi / 4
        object.__setattr__(self, "phi_1", self.phi_1 + shift)
        object.__setattr__(self, "phi_2", self.phi_2 + shift)
        object.__setattr__(self, "psi", self.psi + dpsi)
        for name in _ANGLES:
            object.__setattr__(self, name, _wrap(getattr(self, name)))

    @property
    def gamma(self) -> np.ndarray:
        """Complex 2-vector of mode displacements."""
        return gamma_vector(self.gamma_abs, self.alpha, self.phi_d1, self.phi_d2)

    def replace(self, **changes: float) -> "IsotropicGaussianParams":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return IsotropicGaussianParams(**data)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def gamma_vector(gamma_abs: float, alpha: float, phi_d1: float, phi_d2: float) -> np.ndarray:
    return gamma_abs * np.array(
        [np.exp(1j * phi_d1) * np.cos(alpha), np.exp(1j * phi_d2) * np.sin(alpha)]
    )


def displacement_angles(gamma: np.ndarray, tol: float = 0.0) -> tuple[float, float, float, float]:
    """Return ``(gamma_abs, alpha, phi_d1, phi_d2)`` with ``alpha`` in ``[0, pi/2]``.

    Phases of vanishing components are set to zero.
    """
    g1, g2 = complex(gamma[0]), complex(gamma[1])
    norm = math.hypot(abs(g1), abs(g2))
    if norm <= tol or norm == 0.0:
        return 0.0, 0.0, 0.0, 0.0
    alpha = math.atan2(abs(g2), abs(g1))
    phi_d1 = math.atan2(g1.imag, g1.real) if abs(g1) > tol * norm else 0.0
    phi_d2 = math.atan2(g2.imag, g2.real) if abs(g2) > tol * norm else 0.0
    return norm, alpha, phi_d1, phi_d2


@dataclass(frozen=True)
class PhaseSpaceState:
    """First and second moments of a two-mode Gaussian state."""

    sigma: np.ndarray
    d: np.ndarray = field(default_factory=lambda: np.zeros(4, dtype=complex))

    def __post_init__(self) -> None:
        sigma = np.array(self.sigma, dtype=complex)
        d = np.array(self.d, dtype=complex).reshape(-1)
        if sigma.shape != (4, 4) or d.shape != (4,):
            raise ValueError("sigma must be 4x4 and d a 4-vector")
        if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(d))):
            raise ValueError("state contains non-finite entries")
        scale = max(1.0, float(np.abs(sigma).max()))
        if np.abs(sigma - sigma.conj().T).max() > HERMITIAN_TOL * scale:
            raise ValueError("sigma is not Hermitian")
        dscale = max(1.0, float(np.abs(d).max()))
        if abs(d[2] - np.conj(d[0])) > 1e-12 * dscale or abs(d[3] - np.conj(d[1])) > 1e-12 * dscale:
            raise ValueError("d must have the structure (gamma, conj(gamma))")
        sigma.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "d", d)

    @property
    def gamma(self) -> np.ndarray:
        return np.array(self.d[:2])


@dataclass(frozen=True)
class SymplecticMatrix:
    """A 4x4 complex matrix ``m`` with ``m K m^dag = K``."""

    m: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.m, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("symplectic matrix must be 4x4")
        scale = max(1.0, float(np.abs(m).max()) ** 2)
        if np.abs(m @ K @ m.conj().T - K).max() > SYMPLECTIC_TOL * scale:
            raise ValueError("matrix is not symplectic")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.m @ other.m)

    @property
    def dagger(self) -> np.ndarray:
        return self.m.conj().T


def _r1(phi: float) -> np.ndarray:
    return np.diag([np.exp(-1j * phi), 1.0, np.exp(1j * phi), 1.0])


def _r2(phi: float) -> np.ndarray:
    return np.diag([1.0, np.exp(-1j * phi), 1.0, np.exp(1j * phi)])


def _bs(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    blk = np.array([[c, s], [-s, c]])
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = blk
    out[2:, 2:] = blk
    return out


def _sq(r: float, mode: int) -> np.ndarray:
    out = np.eye(4, dtype=complex)
    i, j = (0, 2) if mode == 1 else (1, 3)
    out[i, i] = out[j, j] = math.cosh(r)
    out[i, j] = out[j, i] = -math.sinh(r)
    return out


_FACTORIES = {
    "R1": _r1,
    "R2": _r2,
    "B": _bs,
    "S1": lambda r: _sq(r, 1),
    "S2": lambda r: _sq(r, 2),
    "R_as": lambda phi: _r1(phi) @ _r2(-phi),
    "R_glob": lambda phi: _r1(phi) @ _r2(phi),
}


def symplectic_factory(kind: str, value: float) -> SymplecticMatrix:
    """Elementary Gaussian operation as a phase-space matrix.

    ``kind`` is one of ``R1``, ``R2`` (phase shifts), ``B`` (mode mixing),
    ``S1``, ``S2`` (single-mode squeezing), ``R_as`` (``R1(x) R2(-x)``) or
    ``R_glob`` (``R1(x) R2(x)``).
    """
    try:
        make = _FACTORIES[kind]
    except KeyError:
        raise ValueError(f"unknown symplectic kind {kind!r}; expected one of {sorted(_FACTORIES)}") from None
    value = float(value)
    if not math.isfinite(value):
        raise ValueError("factory parameter must be finite")
    return SymplecticMatrix(make(value))


def passive_block(phi_1: float, phi_2: float, theta: float, psi: float) -> np.ndarray:
    """Upper-left 2x2 block of ``R1(phi_1) R2(phi_2) B(theta) R_as(psi)``."""
    c, s = math.cos(theta), math.sin(theta)
    left = np.array([np.exp(-1j * phi_1), np.exp(-1j * phi_2)])
    right = np.array([np.exp(-1j * psi), np.exp(1j * psi)])
    return left[:, None] * np.array([[c, s], [-s, c]]) * right[None, :]


def _decomposition_matrix(p: IsotropicGaussianParams) -> np.ndarray:
    return (
        _r1(p.phi_1) @ _r2(p.phi_2) @ _bs(p.theta) @ _r1(p.psi) @ _r2(-p.psi)
        @ _sq(p.r_1, 1) @ _sq(p.r_2, 2)
    )


def build_state(params: IsotropicGaussianParams) -> PhaseSpaceState:
    """Phase-space moments ``sigma = nu M M^dag`` and ``d = (gamma, conj gamma)``."""
    m = _decomposition_matrix(params)
    sigma = params.nu * (m @ m.conj().T)
    sigma = 0.5 * (sigma + sigma.conj().T)
    g = params.gamma
    return PhaseSpaceState(sigma, np.concatenate([g, g.conj()]))


def symplectic_eigenvalues(state: PhaseSpaceState) -> tuple[float, float]:
    """Ascending symplectic eigenvalues (absolute eigenvalues of ``K sigma``)."""
    # K sigma is similar to the Hermitian sigma^{1/2} K sigma^{1/2}, whose
    # eigenvalues are far better conditioned for strongly squeezed states
    w, v = np.linalg.eigh(state.sigma)
    if w[0] <= 0.0:
        raise NonPhysicalStateError("covariance matrix is not positive definite")
    root = (v * np.sqrt(w)) @ v.conj().T
    ev = np.abs(np.linalg.eigvalsh(root @ K @ root))
    ev.sort()
    # eigenvalues come in +-nu pairs
    nu1, nu2 = 0.5 * (ev[0] + ev[1]), 0.5 * (ev[2] + ev[3])
    if nu1 < 1.0 - 1e-6:
        raise NonPhysicalStateError(f"symplectic eigenvalue {nu1:.6g} < 1")
    return float(nu1), float(nu2)


def mean_photon_number(state: PhaseSpaceState) -> float:
    g = state.d[:2]
    return float(np.trace(state.sigma).real / 4.0 - 1.0 + np.sum(np.abs(g) ** 2))


def purity(state: PhaseSpaceState) -> float:
    nu1, nu2 = symplectic_eigenvalues(state)
    return 1.0 / (nu1 * nu2)


def apply_symplectic(
    state: PhaseSpaceState, s: SymplecticMatrix | np.ndarray, shift: np.ndarray | None = None
) -> PhaseSpaceState:
    """Transform moments: ``sigma -> s sigma s^dag`` and ``d -> s d + shift``."""
    if not isinstance(s, SymplecticMatrix):
        s = SymplecticMatrix(s)
    d = s.m @ state.d
    if shift is not None:
        shift = np.asarray(shift, dtype=complex).reshape(4)
        d = d + shift
    sigma = s.m @ state.sigma @ s.dagger
    return PhaseSpaceState(0.5 * (sigma + sigma.conj().T), d)


def _takagi_2x2(a: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Takagi factorization ``a = u diag(s) u^T`` of a complex symmetric 2x2 matrix.

    Singular values are returned in descending order. Uses the real
    symmetric embedding ``[[Re a, Im a], [Im a, -Re a]]`` whose eigenvector
    ``(x, y)`` for eigenvalue ``s > 0`` gives the Takagi vector ``x + i y``;
    this stays well defined when the two singular values coincide.
    """
    re, im = a.real, a.imag
    h = np.block([[re, im], [im, -re]])
    w, v = np.linalg.eigh(h)
    order = np.argsort(w)[::-1]
    w, v = w[order], v[:, order]
    s = np.clip(w[:2], 0.0, None)
    u = v[:2, :2] + 1j * v[2:, :2]
    scale = max(1.0, s[0])
    if s[0] <= tol * scale:
        return np.zeros(2), np.eye(2, dtype=complex)
    if s[1] <= tol * scale:
        s = np.array([s[0], 0.0])
        c0 = u[:, 0] / np.linalg.norm(u[:, 0])
        c1 = np.array([-np.conj(c0[1]), np.conj(c0[0])])
        return s, np.column_stack([c0, c1])
    # orthonormal in the real sense; normalize in the complex sense
    u = u / np.linalg.norm(u, axis=0)
    return s, u


def passive_angles_array(u: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized decomposition of 2x2 unitaries (shape ``(..., 2, 2)``).

    Returns ``(phi_1, phi_2, theta, psi)`` such that
    ``u = diag(e^{-i phi_1}, e^{-i phi_2}) B(theta) diag(e^{-i psi}, e^{i psi})``
    with ``theta`` in ``[0, pi/2]``. Where ``psi`` is not determined by ``u``
    the split is arbitrary but consistent.
    """
    u = np.asarray(u)
    c = np.minimum(1.0, np.abs(u[..., 0, 0]))
    s = np.minimum(1.0, np.abs(u[..., 0, 1]))
    theta = np.arctan2(s, c)
    a11 = np.angle(u[..., 0, 0])
    a12 = np.angle(u[..., 0, 1])
    phi_1 = -0.5 * (a11 + a12)
    psi = 0.5 * (a12 - a11)
    # read phi_2 from the larger of the two second-row entries
    phi_2 = np.where(
        np.abs(u[..., 1, 1]) >= np.abs(u[..., 1, 0]),
        -np.angle(u[..., 1, 1]) + psi,
        -np.angle(-u[..., 1, 0]) - psi,
    )
    return phi_1, phi_2, theta, psi


def passive_angles(u: np.ndarray, r_1: float = 1.0, r_2: float = 1.0) -> tuple[float, float, float, float]:
    """Decompose a 2x2 unitary as ``diag(e^{-i phi1}, e^{-i phi2}) B(theta) diag(e^{-i psi}, e^{i psi})``.

    The gauge freedom left by the squeezing content is fixed
    deterministically: if exactly one squeezing parameter vanishes, the
    phase of the corresponding column is irrelevant and ``psi`` is set to 0;
    if both vanish all angles are 0. A mode-diagonal ``u`` also gets
    ``psi = 0``.
    """
    if r_1 == 0.0 and r_2 == 0.0:
        return 0.0, 0.0, 0.0, 0.0
    phi_1, phi_2, theta, psi = (float(x) for x in passive_angles_array(u))
    if theta < 1e-14 or theta > 0.5 * math.pi - 1e-14:
        # only phi_1 -/+ psi and phi_2 +/- psi are defined
        if theta < 1e-14:
            phi_1, phi_2 = phi_1 + psi, phi_2 - psi
        else:
            phi_1, phi_2 = phi_1 - psi, phi_2 + psi
        psi = 0.0
    elif r_2 == 0.0:
        # u -> u diag(1, e^{it}) leaves the state unchanged: shifts psi by
        # t/2 and both phi by -t/2
        phi_1, phi_2, psi = phi_1 + psi, phi_2 + psi, 0.0
    elif r_1 == 0.0:
        phi_1, phi_2, psi = phi_1 - psi, phi_2 - psi, 0.0
    return phi_1, phi_2, theta, psi


def extract_params(state: PhaseSpaceState, tol: float = 1e-12) -> IsotropicGaussianParams:
    """Invert :func:`build_state` for an isotropic state.

    The returned parameters satisfy ``r_1 >= r_2 >= 0``.
    """
    nu1, nu2 = symplectic_eigenvalues(state)
    # the symplectic spectrum of a strongly squeezed sigma is only known to
    # about eps * cond(sigma); never demand more than that
    w = np.linalg.eigvalsh(state.sigma)
    tol_iso = max(ISOTROPY_TOL, 64 * np.finfo(float).eps * w[-1] / w[0])
    if abs(nu1 - nu2) > tol_iso * max(nu1, nu2):
        raise AnisotropicStateError(f"symplectic eigenvalues differ: {nu1!r} vs {nu2!r}")
    nu = max(1.0, 0.5 * (nu1 + nu2))
    scaled = state.sigma / nu
    # scaled = [[u cosh 2R u^dag, -u sinh 2R u^T], [.., ..]]
    q = -scaled[:2, 2:]
    q = 0.5 * (q + q.T)
    sv, u = _takagi_2x2(q, tol)
    r_1, r_2 = (0.5 * math.asinh(x) for x in sv)
    phi_1, phi_2, theta, psi = passive_angles(u, r_1, r_2)
    gamma_abs, alpha, phi_d1, phi_d2 = displacement_angles(state.d[:2])
    return IsotropicGaussianParams(
        nu=nu, gamma_abs=gamma_abs, alpha=alpha, phi_d1=phi_d1, phi_d2=phi_d2,
        phi_1=phi_1, phi_2=phi_2, theta=theta, psi=psi, r_1=r_1, r_2=r_2,
    )
