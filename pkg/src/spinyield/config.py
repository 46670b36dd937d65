"""Scenario configuration files.

A configuration is a flat text file of ``key = value`` lines with dotted
section keys. Blank lines and lines starting with ``#`` are ignored.
Quantities take an optional unit suffix (``5 lambda``, ``0.1 k``, ``46 uT``,
``90 deg``); bare numbers are SI (rad/s, s^-1, T, rad).

Example::

    schema = 1
    name = fig1
    system.n_nuclei = 1
    system.tensor = 3 lambda, 3 lambda, 5 lambda
    field.b0 = 46 uT
    field.theta.start = 0 deg
    field.theta.stop = 90 deg
    field.theta.count = 91
    initial_state = singlet
    k = 1e4 s^-1

Recognised keys
---------------
``schema``               must be 1
``name``                 label used for output file names
``system.n_nuclei``      number of spin-1/2 nuclei (0 to 6)
``system.tensor``        ``ax, ay, az`` shared by every nucleus
``system.tensor.<i>``    per-nucleus override (1-based)
``field.b0``             field magnitude
``field.theta.start``, ``field.theta.stop``, ``field.theta.count``
                         inclusive uniform grid, or
``field.theta.values``   comma-separated angles
``field.phi``            azimuth (default 0)
``initial_state``        ``singlet``, ``triplet0`` or ``dark_incoherent``
``k``                    recombination rate (default 1e4 s^-1)
``noise.<label>.kind``   ``vertical``, ``parallel`` or ``hyperfine``
``noise.<label>.rate``   noise strength (may use the ``k`` suffix)
``rf.b_rf``              drive amplitude; enables the drive
``rf.omega``             ``exact`` (2 gamma B0), ``measured`` (2 pi x 1.315 MHz, the experimental value) or a frequency
``rf.alpha``             ``orthogonal`` (theta + pi/2, default) or an angle
``engine``               ``full``, ``collective`` or ``auto``
``route``                ``spectral``, ``quadrature``, ``resolvent`` or ``auto``
``sweep.key``            one scalar key to vary across series
``sweep.values``         ``;``-separated values for ``sweep.key``
``output.csv``, ``output.svg``
                         output file names (relative to the output directory)
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ValidationError
from .spin import HyperfineTensor
from .states import ELECTRON_STATES
from .units import GAMMA, K_DEFAULT, parse_quantity

SCHEMA_VERSION = 1
MAX_NUCLEI = 6
MEASURED_RF_FREQUENCY = 1.315e6  # Hz, ordinary frequency
ENGINES = ("full", "collective", "auto")
ROUTES = ("spectral", "quadrature", "resolvent", "auto")
NOISE_KINDS = ("vertical", "parallel", "hyperfine")

_SCALAR_KEYS = (
    "schema",
    "name",
    "system.n_nuclei",
    "system.tensor",
    "field.b0",
    "field.theta.start",
    "field.theta.stop",
    "field.theta.count",
    "field.theta.values",
    "field.phi",
    "initial_state",
    "k",
    "rf.b_rf",
    "rf.omega",
    "rf.alpha",
    "engine",
    "route",
    "sweep.key",
    "sweep.values",
    "output.csv",
    "output.svg",
)
_TENSOR_KEY = re.compile(r"^system\.tensor\.(\d+)$")
_NOISE_KEY = re.compile(r"^noise\.([A-Za-z0-9_]+)\.(kind|rate)$")
_NAME = re.compile(r"^[A-Za-z0-9_.-]+$")


class ConfigError(ValidationError):
    """A configuration value is missing or invalid; ``path`` names the offending key."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _known(key: str) -> bool:
    return key in _SCALAR_KEYS or bool(_TENSOR_KEY.match(key) or _NOISE_KEY.match(key))


def parse_config_text(text: str) -> dict[str, str]:
    """Split a configuration text into an ordered ``{key: raw value}`` mapping."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {stripped!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not _known(key):
            raise ConfigError(key, f"unknown key (line {lineno})")
        if key in raw:
            raise ConfigError(key, f"duplicate key (line {lineno})")
        raw[key] = value
    return raw


def load_config(path: str | Path) -> "ScenarioConfig":
    """Read and validate a configuration file. ``OSError`` propagates unchanged."""
    text = Path(path).read_text(encoding="utf-8")
    return ScenarioConfig.from_mapping(parse_config_text(text))


def _quantity(raw: dict, key: str, dimension: str, k: float, default=None) -> float:
    if key not in raw:
        if default is None:
            raise ConfigError(key, "missing required key")
        return default
    try:
        value, dim = parse_quantity(raw[key], k)
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from None
    if dim is not None and dim != dimension:
        raise ConfigError(key, f"expected a {dimension}, got a {dim} ({raw[key]!r})")
    if not math.isfinite(value):
        raise ConfigError(key, "value must be finite")
    return value


def _quantity_list(raw: dict, key: str, dimension: str, k: float) -> list[float]:
    parts = [p for p in raw[key].split(",") if p.strip()]
    return [_quantity({key: p}, key, dimension, k) for p in parts]


def _choice(raw: dict, key: str, options, default: str | None = None) -> str:
    value = raw.get(key, default)
    if value is None:
        raise ConfigError(key, "missing required key")
    if value not in options:
        raise ConfigError(key, f"must be one of {', '.join(options)}; got {value!r}")
    return value


def _integer(raw: dict, key: str, low: int, high: int | None = None) -> int:
    if key not in raw:
        raise ConfigError(key, "missing required key")
    try:
        value = int(raw[key])
    except ValueError:
        raise ConfigError(key, f"expected an integer, got {raw[key]!r}") from None
    if value < low or (high is not None and value > high):
        bound = f">= {low}" if high is None else f"in [{low}, {high}]"
        raise ConfigError(key, f"must be {bound}, got {value}")
    return value


@dataclass(frozen=True)
class NoiseConfig:
    label: str
    kind: str
    rate: float


@dataclass(frozen=True)
class RfConfig:
    b_rf: float
    omega: float
    alpha: float | None  # None: orthogonal to the static field at each angle


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario. ``source`` keeps the raw key/value pairs for provenance."""

    name: str
    tensors: tuple[HyperfineTensor, ...]
    b0: float
    thetas: tuple[float, ...]
    phi: float
    initial_state: str
    k: float
    noises: tuple[NoiseConfig, ...]
    rf: RfConfig | None
    engine: str
    route: str
    sweep_key: str | None
    sweep_values: tuple[str, ...]
    output_csv: str
    output_svg: str
    source: tuple[tuple[str, str], ...]

    @property
    def n_nuclei(self) -> int:
        return len(self.tensors)

    @classmethod
    def from_mapping(cls, raw: dict[str, str]) -> "ScenarioConfig":
        raw = dict(raw)
        if raw.get("schema") != str(SCHEMA_VERSION):
            raise ConfigError("schema", f"must be {SCHEMA_VERSION}, got {raw.get('schema')!r}")
        name = raw.get("name", "scenario")
        if not _NAME.match(name):
            raise ConfigError("name", f"only letters, digits, '.', '_' and '-' are allowed; got {name!r}")

        k = _quantity({key: v for key, v in raw.items() if key == "k"}, "k", "rate", K_DEFAULT, K_DEFAULT)
        if "k" in raw and raw["k"].strip().lower().endswith(" k"):
            raise ConfigError("k", "k cannot be expressed in units of itself")
        if k <= 0:
            raise ConfigError("k", f"must be positive, got {k}")

        n = _integer(raw, "system.n_nuclei", 0, MAX_NUCLEI)
        tensors = []
        for i in range(1, n + 1):
            key = f"system.tensor.{i}" if f"system.tensor.{i}" in raw else "system.tensor"
            if key not in raw:
                raise ConfigError(f"system.tensor.{i}", "missing tensor (set system.tensor or system.tensor.<i>)")
            comps = _quantity_list(raw, key, "frequency", k)
            if len(comps) != 3:
                raise ConfigError(key, f"expected three components 'ax, ay, az', got {len(comps)}")
            tensors.append(HyperfineTensor(*comps))
        for key in raw:
            m = _TENSOR_KEY.match(key)
            if m and not 1 <= int(m.group(1)) <= n:
                raise ConfigError(key, f"nucleus index out of range 1..{n}")

        b0 = _quantity(raw, "field.b0", "field", k)
        if b0 <= 0:
            raise ConfigError("field.b0", f"must be positive, got {b0}")
        thetas = cls._theta_grid(raw, k)
        phi = _quantity(raw, "field.phi", "angle", k, 0.0)
        initial = _choice(raw, "initial_state", ELECTRON_STATES, "singlet")

        noises = cls._noises(raw, k, n)
        rf = cls._rf(raw, k, b0)
        engine = _choice(raw, "engine", ENGINES, "auto")
        route = _choice(raw, "route", ROUTES, "auto")

        sweep_key, sweep_values = raw.get("sweep.key"), ()
        if sweep_key is not None:
            if "sweep.values" not in raw:
                raise ConfigError("sweep.values", "required when sweep.key is set")
            if not _known(sweep_key) or sweep_key.startswith("sweep.") or sweep_key in ("schema", "name"):
                raise ConfigError("sweep.key", f"cannot sweep {sweep_key!r}")
            sweep_values = tuple(v.strip() for v in raw["sweep.values"].split(";") if v.strip())
            if not sweep_values:
                raise ConfigError("sweep.values", "no values given")
            if len(set(sweep_values)) != len(sweep_values):
                raise ConfigError("sweep.values", "values must be distinct")
            for v in sweep_values:
                if "," in v and sweep_key != "system.tensor" and not _TENSOR_KEY.match(sweep_key):
                    raise ConfigError("sweep.values", f"value {v!r} contains a comma")
        elif "sweep.values" in raw:
            raise ConfigError("sweep.key", "required when sweep.values is set")

        config = cls(
            name=name,
            tensors=tuple(tensors),
            b0=b0,
            thetas=thetas,
            phi=phi,
            initial_state=initial,
            k=k,
            noises=noises,
            rf=rf,
            engine=engine,
            route=route,
            sweep_key=sweep_key,
            sweep_values=sweep_values,
            output_csv=raw.get("output.csv", f"{name}.csv"),
            output_svg=raw.get("output.svg", f"{name}.svg"),
            source=tuple(raw.items()),
        )
        for _, variant in config.variants():
            variant._check_compatibility()
        return config

    @staticmethod
    def _theta_grid(raw: dict, k: float) -> tuple[float, ...]:
        has_values = "field.theta.values" in raw
        has_range = any(f"field.theta.{p}" in raw for p in ("start", "stop", "count"))
        if has_values and has_range:
            raise ConfigError("field.theta", "give either values or start/stop/count, not both")
        if has_values:
            grid = _quantity_list(raw, "field.theta.values", "angle", k)
        elif has_range:
            start = _quantity(raw, "field.theta.start", "angle", k)
            stop = _quantity(raw, "field.theta.stop", "angle", k)
            count = _integer(raw, "field.theta.count", 0)
            grid = list(np.linspace(start, stop, count))
        else:
            raise ConfigError("field.theta", "missing theta grid")
        if not grid:
            raise ConfigError("field.theta", "theta grid is empty")
        grid = sorted(float(t) for t in grid)
        if len(set(grid)) != len(grid):
            raise ConfigError("field.theta", "theta values must be distinct")
        return tuple(grid)

    @staticmethod
    def _noises(raw: dict, k: float, n: int) -> tuple[NoiseConfig, ...]:
        labels: list[str] = []
        for key in raw:
            m = _NOISE_KEY.match(key)
            if m and m.group(1) not in labels:
                labels.append(m.group(1))
        out = []
        for label in labels:
            prefix = f"noise.{label}"
            kind = _choice(raw, f"{prefix}.kind", NOISE_KINDS)
            rate = _quantity(raw, f"{prefix}.rate", "rate", k)
            if rate < 0:
                raise ConfigError(f"{prefix}.rate", f"must be non-negative, got {rate}")
            if kind == "hyperfine" and n != 1:
                raise ConfigError(f"{prefix}.kind", f"hyperfine noise needs exactly one nucleus, got {n}")
            out.append(NoiseConfig(label, kind, rate))
        return tuple(out)

    @staticmethod
    def _rf(raw: dict, k: float, b0: float) -> RfConfig | None:
        if "rf.b_rf" not in raw:
            for key in ("rf.omega", "rf.alpha"):
                if key in raw:
                    raise ConfigError("rf.b_rf", f"required when {key} is set")
            return None
        b_rf = _quantity(raw, "rf.b_rf", "field", k)
        if b_rf < 0:
            raise ConfigError("rf.b_rf", f"must be non-negative, got {b_rf}")
        omega_raw = raw.get("rf.omega", "exact")
        if omega_raw == "exact":
            omega = 2 * GAMMA * b0
        elif omega_raw == "measured":
            omega = 2 * math.pi * MEASURED_RF_FREQUENCY
        else:
            omega = _quantity(raw, "rf.omega", "frequency", k)
        if omega <= 0:
            raise ConfigError("rf.omega", f"must be positive, got {omega}")
        alpha_raw = raw.get("rf.alpha", "orthogonal")
        alpha = None if alpha_raw == "orthogonal" else _quantity(raw, "rf.alpha", "angle", k)
        return RfConfig(b_rf, omega, alpha)

    def _check_compatibility(self) -> None:
        if self.engine == "collective":
            if self.n_nuclei == 0 or len(set(self.tensors)) != 1 or not self.tensors[0].axial:
                raise ConfigError("engine", "collective engine needs identical axial tensors")
            if self.noises or self.rf is not None:
                raise ConfigError("engine", "collective engine supports static noiseless runs only")
            if self.route not in ("spectral", "auto"):
                raise ConfigError("route", "collective engine supports the spectral route only")
        if self.rf is not None:
            if self.noises:
                raise ConfigError("rf", "a drive cannot be combined with noise")
            if self.route == "resolvent":
                raise ConfigError("route", "driven runs use the spectral (Floquet) or quadrature route")
        if self.noises and self.route == "spectral":
            raise ConfigError("route", "noisy runs need the resolvent or quadrature route")
        dim = 4 * 2**self.n_nuclei
        if (self.noises or self.route == "resolvent") and dim * dim > 4096:
            raise ConfigError("system.n_nuclei", f"Liouville dimension {dim * dim} exceeds 4096")

    def variants(self) -> list[tuple[str | None, "ScenarioConfig"]]:
        """One ``(label, config)`` per sweep value; a single ``(None, self)`` without a sweep."""
        if self.sweep_key is None:
            return [(None, self)]
        out = []
        base = {key: v for key, v in self.source if not key.startswith("sweep.")}
        for value in self.sweep_values:
            raw = dict(base)
            raw[self.sweep_key] = value
            out.append((value, ScenarioConfig.from_mapping(raw)))
        return out

    def with_route(self, route: str) -> "ScenarioConfig":
        raw = dict(self.source)
        raw["route"] = route
        return ScenarioConfig.from_mapping(raw)

    def to_text(self) -> str:
        return "".join(f"{key} = {value}\n" for key, value in self.source)
