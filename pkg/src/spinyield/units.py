"""Physical constants and reduced-unit conversions.

Internally every coupling is an angular frequency (rad/s) and every field a
magnetic induction in Tesla. The reduced units used throughout the model are

* ``LAMBDA`` -- the electron Zeeman energy in a 46 uT field, ``gamma * 46e-6``;
* ``k`` -- the radical-pair recombination rate (default ``1e4 s^-1``).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from scipy import constants

G_S = 2.0
MU_B = constants.physical_constants["Bohr magneton"][0]
# hbar absorbed: Pauli spin operators, energies in rad/s
GAMMA = G_S * MU_B / (2.0 * constants.hbar)
REFERENCE_FIELD = 46e-6
LAMBDA = GAMMA * REFERENCE_FIELD
K_DEFAULT = 1e4


@dataclass(frozen=True)
class UnitSystem:
    """Conversion factors between SI and the model's reduced units."""

    gamma: float = GAMMA
    k_default: float = K_DEFAULT

    @property
    def lambda_unit(self) -> float:
        return self.gamma * REFERENCE_FIELD

    def to_lambda(self, omega: float) -> float:
        return omega / self.lambda_unit

    def from_lambda(self, value: float) -> float:
        return value * self.lambda_unit

    def field_to_omega(self, b: float) -> float:
        return self.gamma * b


DEFAULT_UNITS = UnitSystem()

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")

# suffix -> (dimension, factor to SI / rad s^-1); Hz suffixes are ordinary
# frequencies and are converted to angular ones
_SUFFIXES = {
    "": (None, 1.0),
    "lambda": ("frequency", LAMBDA),
    "rad/s": ("frequency", 1.0),
    "k": ("rate", None),
    "s^-1": ("rate", 1.0),
    "hz": ("frequency", 2 * math.pi),
    "khz": ("frequency", 2e3 * math.pi),
    "mhz": ("frequency", 2e6 * math.pi),
    "t": ("field", 1.0),
    "mt": ("field", 1e-3),
    "ut": ("field", 1e-6),
    "nt": ("field", 1e-9),
    "rad": ("angle", 1.0),
    "deg": ("angle", math.pi / 180.0),
}


def parse_quantity(text: str, k: float = K_DEFAULT) -> tuple[float, str | None]:
    """Parse ``"5 lambda"``, ``"0.1 k"``, ``"46 uT"`` or a bare number.

    Returns the value converted to SI / rad s^-1 and the dimension implied by
    the suffix (``None`` for a bare number). ``k`` resolves the ``k`` suffix.
    """
    match = _QUANTITY.match(text)
    if match is None:
        raise ValueError(f"cannot parse quantity {text!r}")
    number, suffix = float(match.group(1)), match.group(2).lower()
    if suffix not in _SUFFIXES:
        raise ValueError(f"unknown unit suffix {suffix!r} in {text!r}")
    dimension, factor = _SUFFIXES[suffix]
    if suffix == "k":
        factor = k
    return number * factor, dimension
