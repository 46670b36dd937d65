"""Scenario execution: engine and route resolution, grid evaluation, result tables."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .closed import YieldRecord, full_observables, yield_quadrature, yield_spectral
from .collective import couplings_of, sector_yield
from .config import ScenarioConfig
from .exceptions import NumericalError
from .open_dynamics import NoiseSpec, build_liouvillian, master_yield_quadrature, resolvent_yield
from .rf import RfField, rf_yield
from .spin import FieldVector, SpinSystem
from .states import initial_state

COLUMNS = ("theta_rad", "theta_deg", "phi_s", "phi_p", "phi_c")


@dataclass
class ResultTable:
    """Rows sorted by series then theta, plus provenance metadata.

    ``series`` is ``None`` for single-series runs; otherwise each row starts
    with its series label. ``wall_time`` is kept out of ``metadata`` so that
    repeated runs produce identical files.
    """

    metadata: list[tuple[str, str]]
    rows: list[tuple]
    series: tuple[str, ...] | None = None
    wall_time: float = 0.0
    records: dict = field(default_factory=dict, repr=False)

    @property
    def columns(self) -> tuple[str, ...]:
        return (("series",) if self.series is not None else ()) + COLUMNS

    def column(self, name: str, series: str | None = None) -> np.ndarray:
        idx = self.columns.index(name)
        rows = self.rows if series is None else [r for r in self.rows if r[0] == series]
        return np.array([r[idx] for r in rows], dtype=float)


def resolve_engine(config: ScenarioConfig) -> str:
    if config.engine != "auto":
        return config.engine
    eligible = (
        config.n_nuclei >= 2
        and len(set(config.tensors)) == 1
        and config.tensors[0].axial
        and not config.noises
        and config.rf is None
        and config.route in ("spectral", "auto")
    )
    return "collective" if eligible else "full"


def resolve_route(config: ScenarioConfig) -> str:
    if config.route != "auto":
        return config.route
    return "resolvent" if config.noises else "spectral"


def _noise_specs(config: ScenarioConfig, theta: float) -> list[NoiseSpec]:
    out = []
    for n in config.noises:
        if n.kind == "vertical":
            out.append(NoiseSpec.vertical(n.rate, theta))
        elif n.kind == "parallel":
            out.append(NoiseSpec.parallel(n.rate, theta))
        else:
            out.append(NoiseSpec.hyperfine(n.rate))
    return out


def point_solver(config: ScenarioConfig):
    """Return ``(engine, route, f)`` where ``f(theta)`` yields a :class:`YieldRecord`."""
    engine, route = resolve_engine(config), resolve_route(config)
    system = SpinSystem(config.tensors)
    k = config.k

    if engine == "collective":
        tx, tz = couplings_of(system)

        def collective(theta: float) -> YieldRecord:
            fv = FieldVector(config.b0, theta, config.phi)
            return sector_yield(config.n_nuclei, tx, tz, fv, config.initial_state, k, theta)

        return engine, route, collective

    def full(theta: float) -> YieldRecord:
        fv = FieldVector(config.b0, theta, config.phi)
        rho0 = initial_state(system, config.initial_state, theta, config.phi)
        if config.rf is not None:
            alpha = theta + np.pi / 2 if config.rf.alpha is None else config.rf.alpha
            drive = RfField(config.rf.b_rf, config.rf.omega, alpha)
            method = "stepping" if route == "quadrature" else "floquet"
            return rf_yield(system, fv, drive, rho0, k, theta, method=method)
        if route == "spectral":
            return yield_spectral(system, fv, rho0, k, theta)
        if route == "quadrature" and not config.noises:
            return yield_quadrature(system, fv, rho0, k, theta)
        lv = build_liouvillian(system, fv, _noise_specs(config, theta))
        obs = full_observables(system, theta, config.phi)
        if route == "resolvent":
            return resolvent_yield(lv, rho0, obs, k, theta)
        return master_yield_quadrature(lv, rho0, obs, k, theta)

    return engine, route, full


def evaluate(config: ScenarioConfig, jobs: int = 1) -> tuple[str, str, list[YieldRecord]]:
    """Evaluate one (non-swept) configuration over its theta grid, in grid order."""
    engine, route, solve = point_solver(config)
    grid = list(config.thetas)
    if jobs > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(solve, grid))
    else:
        records = [solve(t) for t in grid]
    for r in records:
        if not all(np.isfinite(r.as_tuple())):
            raise NumericalError(f"non-finite yield at theta={r.theta:.6g} rad")
    return engine, route, records


def run_scenario(config: ScenarioConfig, jobs: int = 1, route: str | None = None) -> ResultTable:
    """Run every series of ``config``; ``route`` overrides the configured route."""
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    if route is not None:
        config = config.with_route(route)
    start = time.perf_counter()
    metadata = [("generator", f"spinyield {__version__}")]
    rows: list[tuple] = []
    records: dict = {}
    labels = []
    for label, variant in config.variants():
        engine, resolved, recs = evaluate(variant, jobs)
        tag = "" if label is None else f"series[{label}]."
        metadata += [(f"{tag}engine", engine), (f"{tag}route", resolved)]
        records[label] = recs
        labels.append(label)
        for r in recs:
            row = (r.theta, float(np.degrees(r.theta)), r.phi_s, r.phi_p, r.phi_c)
            rows.append(row if label is None else (label, *row))
    metadata += [("config", f"{key} = {value}") for key, value in config.source]
    series = None if config.sweep_key is None else tuple(labels)
    return ResultTable(metadata, rows, series, time.perf_counter() - start, records)
