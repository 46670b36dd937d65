"""Initial states on the full electron (x) nuclear space."""
from __future__ import annotations

import numpy as np

from .dark import SINGLET, TRIPLET0, dark_frame
from .spin import SpinSystem, check_density

ELECTRON_STATES = ("singlet", "triplet0", "dark_incoherent")


def electron_state(kind, theta: float | None = None, phi: float = 0.0) -> np.ndarray:
    """4x4 electron density matrix for a named state or a validated custom matrix.

    ``dark_incoherent`` is the equal mixture of the two dark states at ``theta``.
    """
    if not isinstance(kind, str):
        rho = check_density(np.asarray(kind, dtype=complex), name="custom electron state")
        if rho.shape != (4, 4):
            raise ValueError(f"custom electron state must be 4x4, got {rho.shape}")
        return rho
    if kind == "singlet":
        return np.outer(SINGLET, SINGLET.conj())
    if kind == "triplet0":
        return np.outer(TRIPLET0, TRIPLET0.conj())
    if kind == "dark_incoherent":
        if theta is None:
            raise ValueError("dark_incoherent needs the field angle theta")
        fr = dark_frame(theta, phi)
        return 0.5 * (np.outer(fr.d1, fr.d1.conj()) + np.outer(fr.d2, fr.d2.conj()))
    raise ValueError(f"unknown electron state {kind!r}; expected one of {ELECTRON_STATES} or a 4x4 matrix")


def initial_state(
    system: SpinSystem,
    electron_state_kind="singlet",
    theta: float | None = None,
    phi: float = 0.0,
) -> np.ndarray:
    """``rho_electron (x) identity / 2**N`` -- nuclei start completely mixed."""
    rho_e = electron_state(electron_state_kind, theta, phi)
    nd = system.nuclear_dim
    return np.kron(rho_e, np.eye(nd, dtype=complex) / nd)


def reduced_electron(rho_full: np.ndarray) -> np.ndarray:
    """Partial trace over every nucleus; returns the 4x4 electron state."""
    rho_full = np.asarray(rho_full)
    dim = rho_full.shape[0]
    if rho_full.ndim != 2 or rho_full.shape != (dim, dim) or dim % 4 or (dim // 4) & (dim // 4 - 1):
        raise ValueError(f"expected a (4*2**N)-square matrix, got shape {rho_full.shape}")
    nd = dim // 4
    return np.einsum("aibi->ab", rho_full.reshape(4, nd, 4, nd))


def reduced_nuclear(rho_full: np.ndarray) -> np.ndarray:
    rho_full = np.asarray(rho_full)
    nd = rho_full.shape[0] // 4
    return np.einsum("aiaj->ij", rho_full.reshape(4, nd, 4, nd))
