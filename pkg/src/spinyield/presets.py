"""Named scenarios reproducing each figure of the compass study.

Every preset is stored as configuration text so that ``spinyield preset``
and ``spinyield run --config`` share one code path and a written preset file
reproduces the run exactly.
"""
from __future__ import annotations

from .config import ConfigError, ScenarioConfig, parse_config_text

_GRID = """\
field.b0 = 46 uT
field.theta.start = 0 deg
field.theta.stop = 90 deg
field.theta.count = 91
k = 1e4 s^-1
"""

_ANISOTROPIC = "system.tensor = 3 lambda, 3 lambda, 5 lambda\n"
_NOISE_GRID = "0 k; 0.01 k; 0.1 k; 1 k; 10 k"

_PRESETS: dict[str, tuple[str, str]] = {
    "fig1": (
        "single nucleus, A = (3, 3, 5) lambda, singlet start",
        "system.n_nuclei = 1\n" + _ANISOTROPIC + _GRID + "initial_state = singlet\n",
    ),
    "fig2a": (
        "vertical magnetic noise (axis theta + pi/2), rates 0 to 10 k",
        "system.n_nuclei = 1\n" + _ANISOTROPIC + _GRID + "initial_state = singlet\n"
        "noise.magnetic.kind = vertical\nnoise.magnetic.rate = 0 k\n"
        f"sweep.key = noise.magnetic.rate\nsweep.values = {_NOISE_GRID}\n",
    ),
    "fig2b": (
        "parallel magnetic noise (axis theta), rates 0 to 10 k",
        "system.n_nuclei = 1\n" + _ANISOTROPIC + _GRID + "initial_state = singlet\n"
        "noise.magnetic.kind = parallel\nnoise.magnetic.rate = 0 k\n"
        f"sweep.key = noise.magnetic.rate\nsweep.values = {_NOISE_GRID}\n",
    ),
    "fig3": (
        "hyperfine-coupling noise, rates 0 to 10 k",
        "system.n_nuclei = 1\n" + _ANISOTROPIC + _GRID + "initial_state = singlet\n"
        "noise.hyperfine.kind = hyperfine\nnoise.hyperfine.rate = 0 k\n"
        f"sweep.key = noise.hyperfine.rate\nsweep.values = {_NOISE_GRID}\n",
    ),
    "figA1": (
        "N = 1..4 identical nuclei, Tz = 5 lambda, Tx = 3 lambda (A = T / 2 per nucleus)",
        "system.n_nuclei = 1\nsystem.tensor = 1.5 lambda, 1.5 lambda, 2.5 lambda\n" + _GRID
        + "initial_state = singlet\nsweep.key = system.n_nuclei\nsweep.values = 1; 2; 3; 4\n",
    ),
    "figA2": (
        "field intensities 32.2, 46 and 59.8 uT",
        "system.n_nuclei = 1\n" + _ANISOTROPIC + _GRID + "initial_state = singlet\n"
        "sweep.key = field.b0\nsweep.values = 32.2 uT; 46 uT; 59.8 uT\n",
    ),
    "figA3": (
        "orthogonal 150 nT drive at the dark-coherence resonance 2 gamma B0, against no drive",
        "system.n_nuclei = 1\n" + _ANISOTROPIC + _GRID + "initial_state = singlet\n"
        "rf.b_rf = 0 nT\nrf.omega = exact\nrf.alpha = orthogonal\n"
        "sweep.key = rf.b_rf\nsweep.values = 0 nT; 150 nT\n",
    ),
    "figA4": (
        "isotropic A = 5 lambda, triplet start, N = 1..4",
        "system.n_nuclei = 1\nsystem.tensor = 5 lambda, 5 lambda, 5 lambda\n" + _GRID
        + "initial_state = triplet0\nsweep.key = system.n_nuclei\nsweep.values = 1; 2; 3; 4\n",
    ),
}

PRESET_NAMES = tuple(_PRESETS)


def preset_description(name: str) -> str:
    _require(name)
    return _PRESETS[name][0]


def preset_text(name: str) -> str:
    """Configuration text of a preset, starting with the schema and name lines."""
    _require(name)
    return f"schema = 1\nname = {name}\n" + _PRESETS[name][1]


def preset(name: str) -> ScenarioConfig:
    return ScenarioConfig.from_mapping(parse_config_text(preset_text(name)))


def _require(name: str) -> None:
    if name not in _PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}")
