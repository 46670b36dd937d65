"""Collective angular-momentum sectors for baths of identically coupled nuclei.

With ``A_n = diag(tx/2, tx/2, tz/2)`` for every nucleus the hyperfine term is
``tx (s1x Jx + s1y Jy) + tz s1z Jz`` where ``J = sum_n I_n / 2`` is the
standard (spin-1/2 normalised) collective spin and ``s1`` are Pauli
matrices. The Hamiltonian is block diagonal over ``J`` and each block is
repeated ``nu(N, J)`` times, so a bath of N nuclei costs a handful of
``4 (2J + 1)``-dimensional problems instead of one ``4 * 2**N`` problem.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .closed import SpectralDecomposition, YieldRecord, spectral_yields
from .dark import dark_observables
from .exceptions import UnsupportedConfigurationError
from .spin import PAULI, FieldVector, SpinSystem
from .states import electron_state
from .units import GAMMA


def _as_half_integer(j) -> Fraction:
    f = Fraction(j).limit_denominator(2)
    if f != Fraction(j) and abs(float(f) - float(j)) > 1e-12:
        raise ValueError(f"{j} is not an integer or half-integer")
    return f


def sector_spins(n: int) -> list[Fraction]:
    """Allowed collective spins ``N/2, N/2 - 1, ...`` down to 0 or 1/2, ascending."""
    if n < 0:
        raise ValueError("n must be non-negative")
    top = Fraction(n, 2)
    return sorted(top - m for m in range(int(top) + 1))


def nu(n: int, j) -> int:
    """Multiplicity of the spin-``j`` sector of ``n`` spin-1/2 nuclei."""
    jf = _as_half_integer(j)
    if jf not in sector_spins(n):
        raise ValueError(f"j={j} is not a valid collective spin for n={n}")
    m = int(Fraction(n, 2) - jf)

    def c(top: int, low: int) -> int:
        return comb(top, low) if low >= 0 else 0

    return c(n, m) - c(n, m - 1)


@dataclass(frozen=True)
class SectorSpec:
    n: int
    j: Fraction

    @property
    def multiplicity(self) -> int:
        return nu(self.n, self.j)

    @property
    def size(self) -> int:
        return int(2 * self.j + 1)

    @property
    def dim(self) -> int:
        return 4 * self.size


def sectors(n: int) -> list[SectorSpec]:
    return [SectorSpec(n, j) for j in sector_spins(n)]


def spin_matrices(j) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(Jx, Jy, Jz)`` for spin ``j`` in the basis ``M = j, j-1, ..., -j``."""
    j = float(_as_half_integer(j))
    m = j - np.arange(int(round(2 * j)) + 1)
    jz = np.diag(m).astype(complex)
    # <M+1|J+|M> = sqrt((J - M)(J + M + 1))
    raise_elems = np.sqrt((j - m[1:]) * (j + m[1:] + 1))
    jp = np.diag(raise_elems, 1).astype(complex)
    jx = 0.5 * (jp + jp.conj().T)
    jy = -0.5j * (jp - jp.conj().T)
    return jx, jy, jz


def sector_hamiltonian(
    sector: SectorSpec,
    field: FieldVector,
    tx: float,
    tz: float,
    gamma: float = GAMMA,
) -> np.ndarray:
    """Hamiltonian block on electron 1 (x) electron 2 (x) spin-J (dimension ``4(2J+1)``)."""
    jx, jy, jz = spin_matrices(sector.j)
    e2 = np.eye(2, dtype=complex)
    bath = np.eye(sector.size, dtype=complex)
    b = gamma * field.cartesian
    h = np.zeros((sector.dim, sector.dim), dtype=complex)
    for axis, component in zip("xyz", b):
        s = PAULI[axis]
        h += component * (np.kron(np.kron(s, e2), bath) + np.kron(np.kron(e2, s), bath))
    for axis, coupling, jop in (("x", tx, jx), ("y", tx, jy), ("z", tz, jz)):
        h += coupling * np.kron(np.kron(PAULI[axis], e2), jop)
    return h


def couplings_of(system: SpinSystem) -> tuple[float, float]:
    """``(tx, tz)`` for a system of identical axial tensors; raises otherwise."""
    if system.n_nuclei == 0:
        return 0.0, 0.0
    if not system.identical:
        raise UnsupportedConfigurationError("collective sectors need identical hyperfine tensors")
    t = system.tensors[0]
    if not t.axial:
        raise UnsupportedConfigurationError("collective sectors need axial tensors (ax == ay)")
    return 2.0 * t.ax, 2.0 * t.az


def sector_yield(
    n: int,
    tx: float,
    tz: float,
    field: FieldVector,
    rho0_electron,
    k: float,
    theta: float | None = None,
    gamma: float = GAMMA,
    jobs: int = 1,
) -> YieldRecord:
    """Yield of the ``n``-nucleus bath aggregated over collective sectors.

    Each sector starts in ``rho_electron (x) 1/(2J+1)`` (the uniform mixture
    over ``M``) and contributes with weight ``nu(n, J) (2J+1) / 2**n``.
    """
    theta = field.theta if theta is None else theta
    rho_e = electron_state(rho0_electron, theta, field.phi)
    obs_e = dark_observables(theta, field.phi)

    def one(sector: SectorSpec) -> np.ndarray:
        bath = np.eye(sector.size, dtype=complex)
        dec = SpectralDecomposition.of(sector_hamiltonian(sector, field, tx, tz, gamma))
        rho = np.kron(rho_e, bath / sector.size)
        values = spectral_yields(dec, rho, [np.kron(p, bath) for p in obs_e], k)
        return sector.multiplicity * sector.size / 2**n * np.array(values)

    specs = sectors(n)
    if jobs > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(one, specs))
    else:
        parts = [one(s) for s in specs]
    s, p, c = np.sum(parts, axis=0)
    return YieldRecord(theta, float(s), float(p), float(c))
