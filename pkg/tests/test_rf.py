import numpy as np
import pytest

from spinyield.analytic import VerticalSingleParams, rf_correction
from spinyield.closed import propagate, yield_spectral
from spinyield.exceptions import ResolutionError
from spinyield.rf import (
    RfField,
    fastest_frequency,
    propagate_rf,
    required_steps,
    rf_hamiltonian,
    rf_yield,
)
from spinyield.spin import FieldVector, build_h0
from spinyield.states import initial_state
from spinyield.units import LAMBDA

from conftest import B0, K


def _resonant(b_rf, theta, factor=1.0):
    return RfField.orthogonal(b_rf, factor * 2 * 8.7941e10 * B0, theta)


def test_rf_field_validation():
    with pytest.raises(ValueError):
        RfField(-1e-9, 1e6, 0.0)
    with pytest.raises(ValueError):
        RfField(1e-9, 0.0, 0.0)
    rf = RfField.orthogonal(1e-9, 2.0, 0.3)
    assert rf.alpha == pytest.approx(0.3 + np.pi / 2)
    assert rf.period == pytest.approx(np.pi)


def test_hamiltonian_reduces_to_static(fig1_system):
    f = FieldVector(B0, 0.4)
    rf = RfField(0.0, 1e6, 1.0)
    np.testing.assert_array_equal(rf_hamiltonian(fig1_system, f, rf, 3e-7), build_h0(fig1_system, f))


def test_zero_drive_matches_closed_propagation(fig1_system):
    f = FieldVector(B0, 0.8)
    rf = _resonant(0.0, 0.8)
    rho0 = initial_state(fig1_system, "singlet")
    t = 2e-6
    steps = required_steps(t, fastest_frequency(fig1_system, f, rf))
    got = propagate_rf(fig1_system, f, rf, rho0, t, steps)
    assert np.abs(got - propagate(fig1_system, f, rho0, t)).max() < 1e-8


def test_driven_state_stays_physical(fig1_system):
    theta = 0.5
    f = FieldVector(B0, theta)
    rf = _resonant(150e-9, theta)
    rho0 = initial_state(fig1_system, "singlet")
    t = 5e-6
    rho = propagate_rf(fig1_system, f, rf, rho0, t, required_steps(t, fastest_frequency(fig1_system, f, rf), 64))
    assert abs(np.trace(rho) - 1) < 1e-10
    assert abs(np.trace(rho @ rho).real - np.trace(rho0 @ rho0).real) < 1e-8


def test_under_resolved_stepping_is_refused(fig1_system):
    f = FieldVector(B0, 0.5)
    rf = _resonant(150e-9, 0.5)
    need = required_steps(1e-5, fastest_frequency(fig1_system, f, rf))
    with pytest.raises(ResolutionError, match=str(need)):
        propagate_rf(fig1_system, f, rf, initial_state(fig1_system, "singlet"), 1e-5, need - 1)
    with pytest.raises(ResolutionError):
        rf_yield(fig1_system, f, rf, initial_state(fig1_system, "singlet"), K, method="floquet", steps=10)


def test_step_doubling_converges(fig1_system):
    theta = 0.7
    f = FieldVector(B0, theta)
    rf = _resonant(150e-9, theta)
    rho0 = initial_state(fig1_system, "singlet")
    t = 2e-5
    n = required_steps(t, fastest_frequency(fig1_system, f, rf), 64)
    from spinyield.closed import full_observables

    ps = full_observables(fig1_system, theta)[0]
    a = np.trace(ps @ propagate_rf(fig1_system, f, rf, rho0, t, n)).real
    b = np.trace(ps @ propagate_rf(fig1_system, f, rf, rho0, t, 2 * n)).real
    assert abs(a - b) < 1e-6


def test_zero_drive_yield_matches_static(fig1_system):
    for theta in (0.2, 1.1):
        f = FieldVector(B0, theta)
        rho0 = initial_state(fig1_system, "singlet")
        got = rf_yield(fig1_system, f, _resonant(0.0, theta), rho0, K)
        want = yield_spectral(fig1_system, f, rho0, K)
        assert np.abs(np.subtract(got.as_tuple(), want.as_tuple())).max() < 1e-8


def test_horizon_must_cover_ten_lifetimes(fig1_system):
    with pytest.raises(ValueError):
        rf_yield(fig1_system, FieldVector(B0, 0.1), _resonant(1e-8, 0.1), initial_state(fig1_system, "singlet"), K, t_max=5 / K)


def test_floquet_matches_stepping(fig1_system):
    k = 2e5
    theta = 0.6
    f = FieldVector(B0, theta)
    rf = _resonant(300e-9, theta)
    rho0 = initial_state(fig1_system, "singlet")
    a = rf_yield(fig1_system, f, rf, rho0, k, method="floquet")
    b = rf_yield(fig1_system, f, rf, rho0, k, method="stepping")
    assert np.abs(np.subtract(a.as_tuple(), b.as_tuple())).max() < 1e-6


@pytest.mark.parametrize("theta", [0.3, 0.9, 1.3])
def test_small_drive_matches_perturbative_drop(vertical_system, theta):
    f = FieldVector(B0, theta)
    rho0 = initial_state(vertical_system, "singlet")
    b_rf = 15e-9
    static = yield_spectral(vertical_system, f, rho0, K).phi_p
    driven = rf_yield(vertical_system, f, _resonant(b_rf, theta), rho0, K).phi_p
    correction = rf_correction(VerticalSingleParams.from_field(B0, theta, 5 * LAMBDA), b_rf, K)
    assert abs((static - driven) - correction) < 0.1 * correction


def test_small_drive_scales_quadratically(vertical_system):
    theta = 0.6
    f = FieldVector(B0, theta)
    rho0 = initial_state(vertical_system, "singlet")
    static = yield_spectral(vertical_system, f, rho0, K).phi_s
    amps = np.array([1e-9, 2e-9, 4e-9])
    drops = [abs(static - rf_yield(vertical_system, f, _resonant(b, theta), rho0, K).phi_s) for b in amps]
    slope = np.polyfit(np.log(amps), np.log(drops), 1)[0]
    assert abs(slope - 2.0) < 0.2
