import math

import pytest

from spinyield.units import DEFAULT_UNITS, GAMMA, LAMBDA, parse_quantity


def test_gamma_and_lambda_values():
    assert GAMMA == pytest.approx(8.794e10, rel=1e-3)
    assert LAMBDA == pytest.approx(4.0454e6, rel=1e-4)
    assert DEFAULT_UNITS.lambda_unit == GAMMA * 46e-6


def test_lambda_round_trip():
    assert DEFAULT_UNITS.to_lambda(DEFAULT_UNITS.from_lambda(5.0)) == pytest.approx(5.0, rel=1e-12)


@pytest.mark.parametrize(
    "text, value, dim",
    [
        ("5 lambda", 5 * LAMBDA, "frequency"),
        ("0.1 k", 1e3, "rate"),
        ("1e4 s^-1", 1e4, "rate"),
        ("46 uT", 46e-6, "field"),
        ("150 nT", 150e-9, "field"),
        ("90 deg", math.pi / 2, "angle"),
        ("1.315 MHz", 2 * math.pi * 1.315e6, "frequency"),
        ("0.25", 0.25, None),
        (".5 rad", 0.5, "angle"),
    ],
)
def test_parse_quantity(text, value, dim):
    got, got_dim = parse_quantity(text)
    assert got == pytest.approx(value, rel=1e-12)
    assert got_dim == dim


def test_parse_quantity_k_suffix_uses_given_rate():
    assert parse_quantity("2 k", k=5e5)[0] == 1e6


@pytest.mark.parametrize("text", ["", "five lambda", "5 furlongs", "5 lambda extra"])
def test_parse_quantity_rejects(text):
    with pytest.raises(ValueError):
        parse_quantity(text)
