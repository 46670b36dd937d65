"""Operator conventions and static Hamiltonians of the radical-pair model.

Conventions
-----------
* Every spin operator, electronic or nuclear, is a Pauli matrix with
  eigenvalues +/-1. The energy scale lives in ``gamma * B`` and in the
  hyperfine couplings.
* Single-spin basis is ``(|1>, |0>)`` so that ``sigma_z = diag(1, -1)``.
* Tensor ordering is electron 1 (x) electron 2 (x) nucleus 1 (x) ... (x) nucleus N,
  giving a Hilbert dimension of ``4 * 2**N``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from functools import reduce

import numpy as np

from .exceptions import ValidationError
from .units import GAMMA, LAMBDA

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

HERMITIAN_TOL = 1e-12


class NonAxialTensorWarning(UserWarning):
    """A hyperfine tensor with ``ax != ay`` was constructed."""


def kron_all(*factors: np.ndarray) -> np.ndarray:
    return reduce(np.kron, factors, np.eye(1, dtype=complex))


@dataclass(frozen=True)
class FieldVector:
    """Static field of magnitude ``magnitude`` (T) along polar ``theta``, azimuth ``phi``."""

    magnitude: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValidationError(f"field magnitude must be >= 0, got {self.magnitude}")

    @property
    def direction(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])

    @property
    def cartesian(self) -> np.ndarray:
        return self.magnitude * self.direction


@dataclass(frozen=True)
class HyperfineTensor:
    """Diagonal hyperfine tensor ``diag(ax, ay, az)`` in rad/s."""

    ax: float
    ay: float
    az: float

    def __post_init__(self):
        if not self.axial:
            warnings.warn(
                f"non-axial hyperfine tensor (ax={self.ax}, ay={self.ay})",
                NonAxialTensorWarning,
                stacklevel=3,
            )

    @property
    def axial(self) -> bool:
        return self.ax == self.ay

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([self.ax, self.ay, self.az], dtype=float)

    @classmethod
    def from_lambda(cls, ax: float, ay: float, az: float) -> "HyperfineTensor":
        return cls(ax * LAMBDA, ay * LAMBDA, az * LAMBDA)

    @classmethod
    def isotropic(cls, a: float) -> "HyperfineTensor":
        return cls(a, a, a)


@dataclass(frozen=True)
class SpinSystem:
    """Two electrons plus ``len(tensors)`` spin-1/2 nuclei coupled to electron 1."""

    tensors: tuple[HyperfineTensor, ...] = dc_field(default_factory=tuple)
    gamma: float = GAMMA

    def __post_init__(self):
        object.__setattr__(self, "tensors", tuple(self.tensors))

    @property
    def n_nuclei(self) -> int:
        return len(self.tensors)

    @property
    def dim(self) -> int:
        return 4 * 2**self.n_nuclei

    @property
    def nuclear_dim(self) -> int:
        return 2**self.n_nuclei

    @property
    def identical(self) -> bool:
        return all(t == self.tensors[0] for t in self.tensors)

    @classmethod
    def uniform(cls, n: int, tensor: HyperfineTensor, **kwargs) -> "SpinSystem":
        return cls(tuple([tensor] * n), **kwargs)


def _site_slot(system: SpinSystem, site) -> int:
    """Map ``"e1"``, ``"e2"``, ``"n<i>"`` (1-based) or an int nucleus index to a slot."""
    if isinstance(site, str):
        key = site.lower()
        if key in ("e1", "electron1"):
            return 0
        if key in ("e2", "electron2"):
            return 1
        for prefix in ("nucleus_", "nucleus", "n"):
            if key.startswith(prefix) and key[len(prefix):].isdigit():
                site = int(key[len(prefix):])
                break
        else:
            raise ValueError(f"unknown site {site!r}")
    if isinstance(site, (int, np.integer)) and 1 <= site <= system.n_nuclei:
        return 1 + int(site)
    raise ValueError(f"unknown site {site!r} for a system with {system.n_nuclei} nuclei")


def embed_pauli(system: SpinSystem, site, axis: str) -> np.ndarray:
    """Pauli matrix ``axis`` acting on ``site``, identity elsewhere."""
    if axis not in PAULI:
        raise ValueError(f"axis must be one of x, y, z; got {axis!r}")
    slot = _site_slot(system, site)
    factors = [np.eye(2, dtype=complex)] * (2 + system.n_nuclei)
    factors[slot] = PAULI[axis]
    return kron_all(*factors)


def build_zeeman(system: SpinSystem, field: FieldVector) -> np.ndarray:
    """``gamma B . (S1 + S2)`` extended by the identity on the nuclei."""
    b = system.gamma * field.cartesian
    h = np.zeros((system.dim, system.dim), dtype=complex)
    for axis, component in zip("xyz", b):
        if component != 0.0:
            h += component * (embed_pauli(system, "e1", axis) + embed_pauli(system, "e2", axis))
    return h


def build_hyperfine(system: SpinSystem) -> np.ndarray:
    h = np.zeros((system.dim, system.dim), dtype=complex)
    for n, tensor in enumerate(system.tensors, start=1):
        for axis, a in zip("xyz", tensor.diagonal):
            if a != 0.0:
                h += a * embed_pauli(system, "e1", axis) @ embed_pauli(system, n, axis)
    return h


def build_h0(system: SpinSystem, field: FieldVector) -> np.ndarray:
    """Static Hamiltonian: two-electron Zeeman term plus electron-1 hyperfine couplings."""
    return build_zeeman(system, field) + build_hyperfine(system)


def build_electron1_hamiltonian(system: SpinSystem, field: FieldVector) -> np.ndarray:
    """Hamiltonian of electron 1 and its bath on the ``2 * 2**N`` space (electron 2 dropped)."""
    b = system.gamma * field.cartesian
    nuc = np.eye(system.nuclear_dim, dtype=complex)
    h = sum(c * np.kron(PAULI[a], nuc) for a, c in zip("xyz", b))
    for n, tensor in enumerate(system.tensors, start=1):
        for axis, a in zip("xyz", tensor.diagonal):
            if a == 0.0:
                continue
            factors = [np.eye(2, dtype=complex)] * system.n_nuclei
            factors[n - 1] = PAULI[axis]
            h = h + a * np.kron(PAULI[axis], kron_all(*factors))
    return np.asarray(h, dtype=complex)


def check_hermitian(op: np.ndarray, tol: float = HERMITIAN_TOL, name: str = "operator") -> np.ndarray:
    # tolerance is relative to the largest entry once entries exceed 1
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValidationError(f"{name} must be a square matrix, got shape {op.shape}")
    scale = max(1.0, float(np.abs(op).max(initial=0.0)))
    if np.abs(op - op.conj().T).max(initial=0.0) > tol * scale:
        raise ValidationError(f"{name} is not Hermitian")
    return op


def check_density(rho: np.ndarray, name: str = "density matrix") -> np.ndarray:
    """Validate Hermiticity (1e-12), unit trace (1e-10) and positivity (-1e-10)."""
    rho = check_hermitian(rho, name=name)
    trace = np.trace(rho).real
    if abs(trace - 1.0) > 1e-10:
        raise ValidationError(f"{name} has trace {trace}, expected 1")
    lowest = np.linalg.eigvalsh(rho)[0]
    if lowest < -1e-10:
        raise ValidationError(f"{name} has negative eigenvalue {lowest}")
    return rho
