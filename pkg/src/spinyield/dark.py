"""Dark/bright frame of the two-electron Zeeman operator.

``M(theta) = sum_i sin(theta) sigma_x^i + cos(theta) sigma_z^i`` has two zero
eigenvalues (the dark states ``D1 = psi (x) psi_perp`` and
``D2 = psi_perp (x) psi``) and the bright states ``B1 = psi (x) psi``
(eigenvalue +2) and ``B2 = psi_perp (x) psi_perp`` (eigenvalue -2), with

    psi(theta)      = cos(theta/2)|1> + sin(theta/2)|0>
    psi_perp(theta) = sin(theta/2)|1> - cos(theta/2)|0>

With the singlet ``|S> = (|10> - |01>)/sqrt(2)`` this phase convention gives
``<S|D1> = -1/sqrt(2)`` and ``<S|D2> = +1/sqrt(2)``; only the relative minus
sign enters the population/coherence split.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .spin import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    FieldVector,
    SpinSystem,
    build_electron1_hamiltonian,
    check_density,
)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
TRIPLET0 = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)


def build_m(theta: float, phi: float = 0.0) -> np.ndarray:
    """Two-electron Zeeman operator in units of ``gamma * B0`` for a field at ``(theta, phi)``."""
    st = np.sin(theta)
    single = st * np.cos(phi) * SIGMA_X + st * np.sin(phi) * SIGMA_Y + np.cos(theta) * SIGMA_Z
    eye = np.eye(2, dtype=complex)
    return np.kron(single, eye) + np.kron(eye, single)


@dataclass(frozen=True)
class DarkFrame:
    theta: float
    psi: np.ndarray
    psi_perp: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    b1: np.ndarray
    b2: np.ndarray

    @property
    def basis(self) -> np.ndarray:
        """Columns ``(d1, d2, b1, b2)``; a unitary change of basis."""
        return np.column_stack([self.d1, self.d2, self.b1, self.b2])


def dark_frame(theta: float, phi: float = 0.0) -> DarkFrame:
    """Dark/bright frame for a field at polar ``theta`` and azimuth ``phi``.

    Off the x-z plane the single-spin states pick up the phase ``exp(i phi)``
    on ``|0>``; both dark-state overlaps with the singlet acquire the same
    phase, so ``f_p`` and ``f_c`` do not depend on it.
    """
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    ph = np.exp(1j * phi)
    psi = np.array([c, ph * s], dtype=complex)
    psi_perp = np.array([s, -ph * c], dtype=complex)
    return DarkFrame(
        theta=theta,
        psi=psi,
        psi_perp=psi_perp,
        d1=np.kron(psi, psi_perp),
        d2=np.kron(psi_perp, psi),
        b1=np.kron(psi, psi),
        b2=np.kron(psi_perp, psi_perp),
    )


def dark_observables(theta: float, phi: float = 0.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Electron-space operators whose expectations are ``f_s``, ``f_p`` and ``f_c``."""
    fr = dark_frame(theta, phi)
    d1d1 = np.outer(fr.d1, fr.d1.conj())
    d2d2 = np.outer(fr.d2, fr.d2.conj())
    d1d2 = np.outer(fr.d1, fr.d2.conj())
    p_s = np.outer(SINGLET, SINGLET.conj())
    p_p = 0.5 * (d1d1 + d2d2)
    p_c = -0.5 * (d1d2 + d1d2.conj().T)
    return p_s, p_p, p_c


def fp_fc(rho_electron: np.ndarray, theta: float, phi: float = 0.0) -> tuple[float, float]:
    """Dark-state population and coherence parts of the singlet population.

    ``f_p = (<D1|rho|D1> + <D2|rho|D2>) / 2`` and
    ``f_c = -(<D1|rho|D2> + <D2|rho|D1>) / 2``; their sum is ``<S|rho|S>``.
    """
    rho = check_density(rho_electron, name="electron state")
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 electron state, got {rho.shape}")
    fr = dark_frame(theta, phi)
    r11 = np.vdot(fr.d1, rho @ fr.d1).real
    r22 = np.vdot(fr.d2, rho @ fr.d2).real
    r12 = np.vdot(fr.d1, rho @ fr.d2)
    return 0.5 * (r11 + r22), -float(r12.real)


def dephase_dark(rho_electron: np.ndarray, theta: float, phi: float = 0.0) -> np.ndarray:
    """Zero the ``D1 <-> D2`` coherences of ``rho`` and leave everything else untouched.

    The result keeps Hermiticity, trace and ``f_p`` and has ``f_c = 0``. It is
    positive whenever ``rho`` has no dark-bright coherence (the singlet, for
    instance); a generic input with such coherence can acquire a small
    negative eigenvalue, because removing a single off-diagonal element is
    not a completely positive map.
    """
    rho = np.asarray(rho_electron, dtype=complex)
    fr = dark_frame(theta, phi)
    r12 = np.vdot(fr.d1, rho @ fr.d2)
    block = r12 * np.outer(fr.d1, fr.d2.conj())
    return rho - block - block.conj().T


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Partial transpose of a two-qubit matrix on the second qubit."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    return r.transpose(0, 3, 2, 1).reshape(4, 4)


def is_ppt(rho: np.ndarray, tol: float = 1e-12) -> bool:
    # for two qubits PPT <=> separable
    return bool(np.linalg.eigvalsh(partial_transpose(rho))[0] >= -tol)


def kraus_operators(system: SpinSystem, field: FieldVector, t: float) -> list[np.ndarray]:
    """Kraus operators ``K_ij = 2**(-N/2) <i|U1(t)|j> (x) U2(t)`` of the reduced electron map.

    ``U1`` propagates electron 1 together with its nuclear bath, ``U2`` is the
    free Zeeman precession of electron 2. The list is ordered with ``i`` major.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    nd = system.nuclear_dim
    u1 = la.expm(-1j * build_electron1_hamiltonian(system, field) * t)
    b = system.gamma * field.cartesian
    h2 = b[0] * SIGMA_X + b[1] * SIGMA_Y + b[2] * SIGMA_Z
    u2 = la.expm(-1j * h2 * t)
    # u1 indices: (electron1, nucleus) x (electron1, nucleus)
    blocks = u1.reshape(2, nd, 2, nd)
    scale = 2.0 ** (-system.n_nuclei / 2)
    return [
        scale * np.kron(blocks[:, i, :, j], u2)
        for i in range(nd)
        for j in range(nd)
    ]


def apply_kraus(kraus: list[np.ndarray], rho: np.ndarray) -> np.ndarray:
    return sum(k @ rho @ k.conj().T for k in kraus)


def verify_incoherence(
    system: SpinSystem,
    field: FieldVector,
    t_samples,
    theta: float | None = None,
) -> float:
    """Largest dark-coherence element any single Kraus operator creates from the incoherent state.

    Returns ``max |Tr[K rho_in K^dag |D^m><D^m'|]|`` over the sampled times,
    all Kraus operators and ``m != m'``, where ``rho_in`` is the equal mixture of
    the dark states at ``theta`` (defaults to ``field.theta``).
    """
    t_samples = np.atleast_1d(np.asarray(t_samples, dtype=float))
    if t_samples.size == 0:
        raise ValueError("t_samples must be non-empty")
    theta = field.theta if theta is None else theta
    fr = dark_frame(theta, field.phi)
    rho_in = 0.5 * (np.outer(fr.d1, fr.d1.conj()) + np.outer(fr.d2, fr.d2.conj()))
    worst = 0.0
    for t in t_samples:
        for k in kraus_operators(system, field, float(t)):
            out = k @ rho_in @ k.conj().T
            worst = max(worst, abs(np.vdot(fr.d2, out @ fr.d1)), abs(np.vdot(fr.d1, out @ fr.d2)))
    return float(worst)


def default_incoherence_times(k: float, samples: int = 64) -> np.ndarray:
    return np.linspace(0.0, 5.0 / k, samples)
