"""Gaussian white-noise master equation and its yields.

    d rho / dt = -i [H0, rho] - sum_noise Gamma [h, [h, rho]]

Superoperators act on column-stacked density matrices,
``vec(rho) = rho.reshape(-1, order="F")``, for which
``vec(A X B) = (B^T (x) A) vec(X)``. Hence

* ``-i [H, .]``   -> ``-i (1 (x) H - H^T (x) 1)``
* ``[h, [h, .]]`` -> ``1 (x) h^2 + (h^2)^T (x) 1 - 2 h^T (x) h``
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
from scipy.integrate import simpson

from .closed import DEFAULT_QUADRATURE_HORIZON, YieldRecord, full_observables, quadrature_grid
from .dark import build_m
from .exceptions import NumericalError, UnsupportedConfigurationError
from .spin import FieldVector, SpinSystem, build_h0, embed_pauli

MAX_LIOUVILLE_DIM = 4096
NOISE_KINDS = ("magnetic", "hyperfine")


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape(d, d, order="F")


@dataclass(frozen=True)
class NoiseSpec:
    """White noise of strength ``rate`` (s^-1).

    ``kind="magnetic"`` couples through ``M(axis_theta)``; ``kind="hyperfine"``
    through ``I . S1`` of a single nucleus.
    """

    kind: str
    rate: float
    axis_theta: float | None = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"noise kind must be one of {NOISE_KINDS}, got {self.kind!r}")
        if self.rate < 0:
            raise ValueError("noise rate must be non-negative")
        if self.kind == "magnetic" and self.axis_theta is None:
            raise ValueError("magnetic noise needs an axis angle")

    @classmethod
    def vertical(cls, rate: float, theta: float) -> "NoiseSpec":
        return cls("magnetic", rate, theta + np.pi / 2)

    @classmethod
    def parallel(cls, rate: float, theta: float) -> "NoiseSpec":
        return cls("magnetic", rate, theta)

    @classmethod
    def hyperfine(cls, rate: float) -> "NoiseSpec":
        return cls("hyperfine", rate)


@dataclass(frozen=True)
class Liouvillian:
    generator: np.ndarray
    hilbert_dim: int

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.generator @ vec(rho), self.hilbert_dim)


def commutator_superop(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0], dtype=complex)
    return np.kron(eye, h) - np.kron(h.T, eye)


def double_commutator_superop(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0], dtype=complex)
    h2 = h @ h
    return np.kron(eye, h2) + np.kron(h2.T, eye) - 2.0 * np.kron(h.T, h)


def noise_operator(system: SpinSystem, noise: NoiseSpec) -> np.ndarray:
    if noise.kind == "magnetic":
        return np.kron(build_m(noise.axis_theta), np.eye(system.nuclear_dim, dtype=complex))
    if system.n_nuclei != 1:
        raise UnsupportedConfigurationError(
            f"hyperfine noise is defined for a single nucleus, system has {system.n_nuclei}"
        )
    return sum(embed_pauli(system, "e1", a) @ embed_pauli(system, 1, a) for a in "xyz")


def build_liouvillian(system: SpinSystem, field: FieldVector, noises=()) -> Liouvillian:
    """Generator of the noisy dynamics on column-stacked density matrices."""
    d = system.dim
    if d * d > MAX_LIOUVILLE_DIM:
        raise UnsupportedConfigurationError(
            f"Liouville dimension {d * d} exceeds the dense limit {MAX_LIOUVILLE_DIM}"
        )
    gen = -1j * commutator_superop(build_h0(system, field))
    for noise in noises:
        if noise.rate:
            gen = gen - noise.rate * double_commutator_superop(noise_operator(system, noise))
    return Liouvillian(gen, d)


def resolvent_yields(liouvillian: Liouvillian, rho0: np.ndarray, observables, k: float) -> list[float]:
    """``k Tr[P (k - L)^{-1} rho0]`` for each observable ``P``; one LU solve."""
    if k <= 0:
        raise ValueError("recombination rate k must be positive")
    a = k * np.eye(liouvillian.dim, dtype=complex) - liouvillian.generator
    try:
        lu = la.lu_factor(a, check_finite=True)
        x = la.lu_solve(lu, vec(rho0))
    except (la.LinAlgError, ValueError) as exc:
        raise NumericalError(f"resolvent solve failed (cond={np.linalg.cond(a):.3e})") from exc
    if not np.all(np.isfinite(x)):
        raise NumericalError(f"resolvent solve is singular (cond={np.linalg.cond(a):.3e})")
    rho_bar = unvec(k * x, liouvillian.hilbert_dim)
    return [float(np.trace(p @ rho_bar).real) for p in observables]


def resolvent_yield(
    liouvillian: Liouvillian,
    rho0: np.ndarray,
    observables,
    k: float,
    theta: float,
) -> YieldRecord:
    """Exact Laplace-transformed singlet yield and dark split under the noisy dynamics.

    ``observables`` are the full-space singlet, dark-population and
    dark-coherence operators (see :func:`spinyield.closed.full_observables`).
    """
    s, p, c = resolvent_yields(liouvillian, rho0, observables, k)
    return YieldRecord(theta, s, p, c)


def noisy_yield(
    system: SpinSystem,
    field: FieldVector,
    rho0: np.ndarray,
    k: float,
    noises=(),
    theta: float | None = None,
) -> YieldRecord:
    theta = field.theta if theta is None else theta
    lv = build_liouvillian(system, field, noises)
    return resolvent_yield(lv, rho0, full_observables(system, theta, field.phi), k, theta)


def integrate_master(liouvillian: Liouvillian, rho0: np.ndarray, t_grid) -> np.ndarray:
    """Density matrices at every time in ``t_grid`` (increasing, starting at 0).

    Each interval is an exact ``expm(L dt)`` step; the propagator is reused
    while consecutive step sizes agree to 1e-10. Returns an array of shape ``(len(t_grid), d, d)``.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or t_grid[0] != 0.0 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing and start at 0")
    d = liouvillian.hilbert_dim
    out = np.empty((t_grid.size, d, d), dtype=complex)
    v = vec(np.asarray(rho0, dtype=complex))
    out[0] = unvec(v, d)
    step, step_dt = None, None
    for i, dt in enumerate(np.diff(t_grid), start=1):
        if step is None or not np.isclose(dt, step_dt, rtol=1e-10, atol=0):
            step, step_dt = la.expm(liouvillian.generator * dt), dt
        v = step @ v
        out[i] = unvec(v, d)
    return out


def master_time_series(liouvillian: Liouvillian, rho0: np.ndarray, observables, times: np.ndarray, block: int = 512):
    """``Tr[P rho(t)]`` on a uniform grid by exact stepping, shape ``(len(observables), len(times))``.

    With ``E = expm(L dt)`` the sample ``j*block + i`` equals
    ``O E^i (E^block)^j vec(rho0)``. The rows ``O E^i`` are built once, the
    block-start states by repeated ``E^block`` products, and one matrix
    product combines them.
    """
    times = np.asarray(times, dtype=float)
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0):
        raise ValueError("times must be uniformly spaced")
    step = la.expm(liouvillian.generator * dt)
    # Tr[P rho] = vec(P^T) . vec(rho)
    rows = np.array([vec(np.asarray(p).T) for p in observables])
    n_obs = rows.shape[0]
    propagated = np.empty((block, n_obs, liouvillian.dim), dtype=complex)
    current = rows
    for i in range(block):
        propagated[i] = current
        current = current @ step
    jump = np.linalg.matrix_power(step, block)
    n_blocks = -(-times.size // block)
    starts = np.empty((liouvillian.dim, n_blocks), dtype=complex)
    v = vec(np.asarray(rho0, dtype=complex))
    for j in range(n_blocks):
        starts[:, j] = v
        v = jump @ v
    values = (propagated.reshape(block * n_obs, -1) @ starts).reshape(block, n_obs, n_blocks)
    # sample index = j * block + i
    return values.transpose(1, 2, 0).reshape(n_obs, n_blocks * block)[:, : times.size].real


def master_yield_quadrature(
    liouvillian: Liouvillian,
    rho0: np.ndarray,
    observables,
    k: float,
    theta: float,
    t_max: float | None = None,
    dt: float | None = None,
) -> YieldRecord:
    """Time-domain yields: integrate the master equation, then Simpson against ``k e^{-kt}``."""
    t_max = DEFAULT_QUADRATURE_HORIZON / k if t_max is None else t_max
    if dt is None:
        omega_max = float(np.abs(np.linalg.eigvals(liouvillian.generator).imag).max())
        dt = 2 * np.pi / (64 * omega_max) if omega_max > 0 else t_max / 1000
    times = quadrature_grid(t_max, dt)
    series = master_time_series(liouvillian, rho0, observables, times)
    weight = k * np.exp(-k * times)
    s, p, c = (float(simpson(weight * f, x=times)) for f in series)
    return YieldRecord(theta, s, p, c)


def anisotropy(records) -> float:
    """``max(Phi_s) - min(Phi_s)`` over the records."""
    records = list(records)
    if len(records) < 2:
        raise ValueError("anisotropy needs at least two records")
    values = [r.phi_s for r in records]
    return float(max(values) - min(values))
