"""Closed-form results for the vertically coupled model.

Everything here is scalar trigonometry and never touches the matrix engine, so
agreement between the two is a genuine cross-check.

With only ``A_z`` coupling a nuclear configuration with collective projection
``M`` acts on electron 1 as an extra field ``M tz / gamma`` along z. For a
single nucleus ``tz = 2 A_z`` and ``M = +/-1/2``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import factorial

import numpy as np

from .collective import nu, sector_spins
from .units import GAMMA

SECULAR_RATIO = 50.0


@dataclass(frozen=True)
class VerticalSingleParams:
    """Effective fields seen by electron 1 for nuclear spin up (+) and down (-).

    ``bx``, ``bz`` are field components in Tesla and ``az`` the vertical
    hyperfine coupling in rad/s.
    """

    bx: float
    bz: float
    az: float
    gamma: float = GAMMA

    @classmethod
    def from_field(cls, b0: float, theta: float, az: float, gamma: float = GAMMA) -> "VerticalSingleParams":
        return cls(b0 * np.sin(theta), b0 * np.cos(theta), az, gamma)

    @property
    def b0(self) -> float:
        return float(np.hypot(self.bx, self.bz))

    @property
    def theta(self) -> float:
        return float(np.arctan2(self.bx, self.bz))

    @property
    def omega0(self) -> float:
        return self.gamma * self.b0

    def _shifted(self, sign: int) -> tuple[float, float]:
        bz = self.bz + sign * self.az / self.gamma
        b = float(np.hypot(self.bx, bz))
        return b, float(np.arctan2(self.bx, bz))

    @property
    def b_plus(self) -> float:
        return self._shifted(+1)[0]

    @property
    def b_minus(self) -> float:
        return self._shifted(-1)[0]

    @property
    def theta_plus(self) -> float:
        return self._shifted(+1)[1]

    @property
    def theta_minus(self) -> float:
        return self._shifted(-1)[1]

    @property
    def omega_plus(self) -> float:
        return self.gamma * self.b_plus

    @property
    def omega_minus(self) -> float:
        return self.gamma * self.b_minus


def _fp_fc_branch(dtheta, omega, omega0, t):
    """Population and coherence parts for one effective field (angle offset ``dtheta``)."""
    s2 = np.sin(dtheta) ** 2
    fp = 0.5 - 0.25 * s2 * (1 - np.cos(2 * omega * t))
    fc = (
        0.5 * np.cos(dtheta / 2) ** 4 * np.cos(2 * (omega - omega0) * t)
        + 0.5 * np.sin(dtheta / 2) ** 4 * np.cos(2 * (omega + omega0) * t)
        + 0.25 * s2 * np.cos(2 * omega0 * t)
    )
    return fp, fc


def _laplace_branch(dtheta, omega, omega0, k):
    """Laplace transforms ``int k e^{-kt} (.) dt`` of :func:`_fp_fc_branch`; cos(w t) -> k^2/(k^2+w^2)."""

    def lor(w):
        return k * k / (k * k + w * w)

    s2 = np.sin(dtheta) ** 2
    phi_p = 0.5 - 0.25 * s2 * (1 - lor(2 * omega))
    phi_c = (
        0.5 * np.cos(dtheta / 2) ** 4 * lor(2 * (omega - omega0))
        + 0.5 * np.sin(dtheta / 2) ** 4 * lor(2 * (omega + omega0))
        + 0.25 * s2 * lor(2 * omega0)
    )
    return phi_p, phi_c


def fp_fc_single(params: VerticalSingleParams, t):
    """Dark population and coherence at time(s) ``t`` for one vertically coupled nucleus."""
    t = np.asarray(t, dtype=float)
    out_p, out_c = 0.0, 0.0
    for omega, th in ((params.omega_plus, params.theta_plus), (params.omega_minus, params.theta_minus)):
        fp, fc = _fp_fc_branch(th - params.theta, omega, params.omega0, t)
        out_p = out_p + 0.5 * fp
        out_c = out_c + 0.5 * fc
    return out_p, out_c


def phi_single_exact(params: VerticalSingleParams, k: float) -> tuple[float, float]:
    """Exact ``(Phi_p, Phi_c)`` from term-by-term Lorentzian integration of the time law."""
    phi_p = phi_c = 0.0
    for omega, th in ((params.omega_plus, params.theta_plus), (params.omega_minus, params.theta_minus)):
        p, c = _laplace_branch(th - params.theta, omega, params.omega0, k)
        phi_p += 0.5 * p
        phi_c += 0.5 * c
    return float(phi_p), float(phi_c)


def _warn_if_not_secular(omegas, k: float | None):
    if k is None:
        return
    slowest = min(omegas)
    if slowest < SECULAR_RATIO * k:
        warnings.warn(
            f"secular approximation needs frequencies >> k (min ratio {slowest / k:.1f} < {SECULAR_RATIO})",
            RuntimeWarning,
            stacklevel=3,
        )


def phi_secular_single(params: VerticalSingleParams, k: float | None = None) -> tuple[float, float]:
    """Secular ``(Phi_p, Phi_c)``: ``1/2 - mean_pm sin^2(theta_pm - theta) / 4`` and 0.

    Pass ``k`` to get a warning when any oscillation frequency is within a
    factor of 50 of ``k``.
    """
    _warn_if_not_secular([params.omega_plus, params.omega_minus, params.omega0], k)
    s2 = 0.5 * (np.sin(params.theta_plus - params.theta) ** 2 + np.sin(params.theta_minus - params.theta) ** 2)
    return float(0.5 - 0.25 * s2), 0.0


def _multi_terms(n: int, tz: float, b0: float, theta: float, gamma: float):
    """Yield ``(weight, dtheta, omega_M)`` for every (J, M) of an n-nucleus vertical bath."""
    bx, bz = b0 * np.sin(theta), b0 * np.cos(theta)
    for j in sector_spins(n):
        w = nu(n, j) / 2**n
        m = float(j)
        while m >= -float(j) - 1e-12:
            bzm = bz + m * tz / gamma
            yield w, float(np.arctan2(bx, bzm)) - theta, gamma * float(np.hypot(bx, bzm))
            m -= 1.0


def fp_fc_multi_vertical(n: int, tz: float, b0: float, theta: float, t, gamma: float = GAMMA):
    """Dark population and coherence of an n-nucleus bath with identical vertical couplings ``tz/2``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    t = np.asarray(t, dtype=float)
    omega0 = gamma * b0
    fp = fc = 0.0
    for w, dth, om in _multi_terms(n, tz, b0, theta, gamma):
        p, c = _fp_fc_branch(dth, om, omega0, t)
        fp = fp + w * p
        fc = fc + w * c
    return fp, fc


def even_n_coherence_constant(n: int) -> float:
    """``N! / ((N/2)!)^2 / 2^(N+1)`` for even N, 0 for odd N."""
    if n % 2:
        return 0.0
    return factorial(n) / factorial(n // 2) ** 2 / 2 ** (n + 1)


def phi_multi_vertical(
    n: int,
    tz: float,
    b0: float,
    theta: float,
    k: float | None = None,
    gamma: float = GAMMA,
) -> tuple[float, float]:
    """``(Phi_p, Phi_c)`` for the n-nucleus vertical bath.

    Without ``k`` the secular forms are returned: ``Phi_c`` is 0 for odd N and
    :func:`even_n_coherence_constant` for even N. With ``k`` the time law is
    Laplace-integrated exactly.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    omega0 = gamma * b0
    if k is not None:
        phi_p = phi_c = 0.0
        for w, dth, om in _multi_terms(n, tz, b0, theta, gamma):
            p, c = _laplace_branch(dth, om, omega0, k)
            phi_p += w * p
            phi_c += w * c
        return float(phi_p), float(phi_c)
    s2 = sum(w * np.sin(dth) ** 2 for w, dth, _ in _multi_terms(n, tz, b0, theta, gamma))
    return float(0.5 - 0.25 * s2), even_n_coherence_constant(n)


def phi_strong_coupling(theta: float, b0: float, az: float, gamma: float = GAMMA) -> float:
    """Second-order expansion of the secular ``Phi_p`` in ``gamma B0 / A_z``."""
    eps = gamma * b0 / az
    if abs(eps) >= 0.3:
        warnings.warn(f"strong-coupling expansion used with gamma*B0/Az = {eps:.3f} >= 0.3", RuntimeWarning, stacklevel=2)
    s2 = np.sin(theta) ** 2
    return float(0.5 - 0.25 * s2 - eps**2 * (0.75 * s2 - s2**2))


def rf_correction(params: VerticalSingleParams, b_rf: float, k: float) -> float:
    """Drop of ``Phi_p`` under a weak resonant drive orthogonal to the static field.

    The short-time population loss ``(gamma B_rf t)^2 / 16 * [cos^2(theta_+ - theta) + cos^2(theta_- - theta)]``
    integrated against ``k e^{-kt}`` (``int k e^{-kt} t^2 dt = 2 / k^2``).
    """
    c2 = np.cos(params.theta_plus - params.theta) ** 2 + np.cos(params.theta_minus - params.theta) ** 2
    return float((params.gamma * b_rf) ** 2 / (8 * k * k) * c2)


def phi_rf_perturbative(params: VerticalSingleParams, b_rf: float, k: float, phi_p: float | None = None) -> float:
    """``Phi_p`` under a weak resonant RF drive; ``phi_p`` defaults to the exact undriven value."""
    if phi_p is None:
        phi_p = phi_single_exact(params, k)[0]
    return phi_p - rf_correction(params, b_rf, k)
