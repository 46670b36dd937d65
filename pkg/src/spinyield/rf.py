"""Driven dynamics under a weak oscillating field.

    H(t) = H0 + gamma B_rf cos(omega t) M(alpha) (x) 1_nuc

Propagation uses the second-order midpoint rule: each step of length ``dt``
applies ``exp(-i H(t + dt/2) dt)``. Step exponentials are evaluated in
batches with a stacked ``eigh``.

Two yield routes are available:

* ``"floquet"`` -- the Hamiltonian is periodic with ``T = 2 pi / omega``, so
  ``U(nT + s) = U(s) U_T^n``. Diagonalising ``U_T = W diag(lambda) W^dag``
  turns the sum over periods into a geometric series,

      Phi = sum_ab rho'_ab Q_ba / (1 - exp(-kT) lambda_a conj(lambda_b)),

  with ``Q = int_0^T k e^{-ks} W^dag U(s)^dag P U(s) W ds`` (Simpson over
  one period). The horizon is infinite and the cost is one period of
  stepping.
* ``"stepping"`` -- straightforward midpoint stepping over ``[0, t_max]``
  with Simpson quadrature of the sampled expectations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
from scipy.integrate import simpson

from .closed import (
    DEFAULT_QUADRATURE_HORIZON,
    MIN_POINTS_PER_PERIOD,
    SpectralDecomposition,
    YieldRecord,
    full_observables,
)
from .dark import build_m
from .exceptions import NumericalError, ResolutionError
from .spin import FieldVector, SpinSystem, build_h0

DEFAULT_STEPS_PER_PERIOD = 64
UNITARITY_TOL = 1e-8
_BATCH = 4096


@dataclass(frozen=True)
class RfField:
    """Linearly polarised drive ``B_rf cos(omega t)`` along ``(sin alpha, 0, cos alpha)``.

    Parameters
    ----------
    b_rf : float
        Amplitude in Tesla, non-negative.
    omega : float
        Angular frequency in rad/s, positive.
    alpha : float
        Polar angle of the drive direction in radians (azimuth fixed to 0).
    """

    b_rf: float
    omega: float
    alpha: float

    def __post_init__(self):
        if not np.isfinite(self.b_rf) or self.b_rf < 0:
            raise ValueError(f"b_rf must be finite and non-negative, got {self.b_rf}")
        if not np.isfinite(self.omega) or self.omega <= 0:
            raise ValueError(f"omega must be finite and positive, got {self.omega}")

    @classmethod
    def orthogonal(cls, b_rf: float, omega: float, theta: float) -> "RfField":
        """Drive perpendicular to a static field at polar angle ``theta``."""
        return cls(b_rf, omega, theta + np.pi / 2)

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega


def rf_operator(system: SpinSystem, rf: RfField) -> np.ndarray:
    """Coupling operator ``gamma B_rf M(alpha) (x) 1`` multiplying ``cos(omega t)``."""
    nuc = np.eye(system.nuclear_dim, dtype=complex)
    return system.gamma * rf.b_rf * np.kron(build_m(rf.alpha), nuc)


def rf_hamiltonian(system: SpinSystem, field: FieldVector, rf: RfField, t: float) -> np.ndarray:
    return build_h0(system, field) + np.cos(rf.omega * t) * rf_operator(system, rf)


def fastest_frequency(system: SpinSystem, field: FieldVector, rf: RfField) -> float:
    """Largest of the drive frequency and the Bohr frequencies of ``H0 +/- drive``."""
    h0 = build_h0(system, field)
    v = rf_operator(system, rf)
    bohr = max(SpectralDecomposition.of(h0 + s * v).max_bohr_frequency for s in (1.0, -1.0))
    return max(rf.omega, bohr)


def required_steps(t_span: float, omega_fast: float, points: int = MIN_POINTS_PER_PERIOD) -> int:
    return int(np.ceil(points * omega_fast * t_span / (2 * np.pi)))


def _check_steps(t_span: float, steps: int, omega_fast: float) -> None:
    need = required_steps(t_span, omega_fast)
    if steps < need:
        raise ResolutionError(
            f"{steps} steps over {t_span:.3e} s under-resolve omega={omega_fast:.4e} rad/s; "
            f"need at least {need} steps ({MIN_POINTS_PER_PERIOD} per fastest period)"
        )


def _step_unitaries(h0, v, omega, t_start, dt, n):
    """Midpoint step propagators for steps ``t_start + i dt``, ``i < n``; shape ``(n, d, d)``."""
    tm = t_start + dt * (np.arange(n) + 0.5)
    hs = h0[None] + np.cos(omega * tm)[:, None, None] * v[None]
    e, w = np.linalg.eigh(hs)
    return (w * np.exp(-1j * e * dt)[:, None, :]) @ w.conj().transpose(0, 2, 1)


def _cumulative_propagators(h0, v, omega, dt, n):
    """``U(i dt)`` for ``i = 0..n``, shape ``(n + 1, d, d)``."""
    d = h0.shape[0]
    out = np.empty((n + 1, d, d), dtype=complex)
    out[0] = np.eye(d)
    u = out[0]
    for start in range(0, n, _BATCH):
        count = min(_BATCH, n - start)
        steps = _step_unitaries(h0, v, omega, start * dt, dt, count)
        for i in range(count):
            u = steps[i] @ u
            out[start + i + 1] = u
    return out


def _check_unitary(u: np.ndarray) -> None:
    d = u.shape[-1]
    err = float(np.abs(u.conj().T @ u - np.eye(d)).max())
    if err > UNITARITY_TOL:
        raise NumericalError(f"driven propagator lost unitarity (error {err:.2e})")


def propagate_rf(
    system: SpinSystem,
    field: FieldVector,
    rf: RfField,
    rho0: np.ndarray,
    t_final: float,
    steps: int,
) -> np.ndarray:
    """Driven state at ``t_final`` after ``steps`` midpoint steps.

    Raises
    ------
    ResolutionError
        If fewer than 50 steps fall in one period of the fastest frequency.
        The message states the required step count.
    """
    if t_final < 0:
        raise ValueError("t_final must be non-negative")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    if t_final == 0:
        return np.array(rho0, dtype=complex)
    _check_steps(t_final, steps, fastest_frequency(system, field, rf))
    h0 = build_h0(system, field)
    v = rf_operator(system, rf)
    dt = t_final / steps
    u = np.eye(system.dim, dtype=complex)
    for start in range(0, steps, _BATCH):
        count = min(_BATCH, steps - start)
        for s in _step_unitaries(h0, v, rf.omega, start * dt, dt, count):
            u = s @ u
    _check_unitary(u)
    return u @ rho0 @ u.conj().T


def _expectations(us: np.ndarray, rho0: np.ndarray, observables) -> np.ndarray:
    """``Tr[P U rho0 U^dag]`` for every stacked ``U``; shape ``(len(observables), len(us))``."""
    rho_t = us @ rho0 @ us.conj().transpose(0, 2, 1)
    return np.array([np.einsum("ij,tji->t", p, rho_t).real for p in observables])


def _floquet_yields(h0, v, omega, rho0, observables, k, steps_per_period):
    period = 2 * np.pi / omega
    m = steps_per_period + steps_per_period % 2
    dt = period / m
    us = _cumulative_propagators(h0, v, omega, dt, m)
    u_period = us[-1]
    _check_unitary(u_period)
    schur_form, w = la.schur(u_period, output="complex")
    lam = np.diag(schur_form)
    gain = 1.0 / (1.0 - np.exp(-k * period) * np.outer(lam, lam.conj()))
    rho_w = w.conj().T @ rho0 @ w
    s = dt * np.arange(m + 1)
    weight = k * np.exp(-k * s)
    uw = us @ w
    out = []
    for p in observables:
        heis = uw.conj().transpose(0, 2, 1) @ p @ uw
        q = simpson(weight[:, None, None] * heis, x=s, axis=0)
        out.append(float(np.sum(rho_w * gain * q.T).real))
    return out


def _stepping_yields(h0, v, omega, rho0, observables, k, t_max, steps):
    n = steps + steps % 2
    dt = t_max / n
    times = dt * np.arange(n + 1)
    series = np.empty((len(observables), n + 1))
    d = h0.shape[0]
    u = np.eye(d, dtype=complex)
    series[:, 0] = _expectations(u[None], rho0, observables)[:, 0]
    for start in range(0, n, _BATCH):
        count = min(_BATCH, n - start)
        steps_u = _step_unitaries(h0, v, omega, start * dt, dt, count)
        block = np.empty_like(steps_u)
        for i in range(count):
            u = steps_u[i] @ u
            block[i] = u
        series[:, start + 1:start + 1 + count] = _expectations(block, rho0, observables)
    _check_unitary(u)
    weight = k * np.exp(-k * times)
    return [float(simpson(weight * f, x=times)) for f in series]


def rf_yield(
    system: SpinSystem,
    field: FieldVector,
    rf: RfField,
    rho0: np.ndarray,
    k: float,
    theta: float | None = None,
    t_max: float | None = None,
    method: str = "floquet",
    steps: int | None = None,
) -> YieldRecord:
    """Singlet yield and dark split under the driven Hamiltonian.

    Parameters
    ----------
    method : {"floquet", "stepping"}
        ``"floquet"`` integrates to infinite time exactly in the number of
        periods; ``steps`` is then the number of midpoint steps per drive
        period. ``"stepping"`` integrates to ``t_max`` (default ``16/k``) and
        ``steps`` counts all midpoint steps.
    steps : int, optional
        Defaults to 64 steps per period of the fastest frequency.
    """
    if k <= 0:
        raise ValueError("recombination rate k must be positive")
    if method not in ("floquet", "stepping"):
        raise ValueError(f"unknown rf method {method!r}")
    theta = field.theta if theta is None else theta
    t_max = DEFAULT_QUADRATURE_HORIZON / k if t_max is None else t_max
    if t_max < 10.0 / k:
        raise ValueError(f"t_max must be at least 10/k, got {t_max * k:.3g}/k")
    omega_fast = fastest_frequency(system, field, rf)
    h0 = build_h0(system, field)
    v = rf_operator(system, rf)
    obs = full_observables(system, theta, field.phi)
    if method == "floquet":
        span = rf.period
        steps = required_steps(span, omega_fast, DEFAULT_STEPS_PER_PERIOD) if steps is None else steps
        _check_steps(span, steps, omega_fast)
        s, p, c = _floquet_yields(h0, v, rf.omega, rho0, obs, k, steps)
    else:
        steps = required_steps(t_max, omega_fast, DEFAULT_STEPS_PER_PERIOD) if steps is None else steps
        _check_steps(t_max, steps, omega_fast)
        s, p, c = _stepping_yields(h0, v, rf.omega, rho0, obs, k, t_max, steps)
    return YieldRecord(theta, s, p, c)
