"""Command-line entry point ``spinyield``.

    spinyield run --config FILE [--out DIR] [--route R] [--jobs N]
    spinyield preset NAME [--out DIR] [--route R] [--jobs N]
    spinyield list-presets

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
``SPINYIELD_JOBS`` sets the worker count when ``--jobs`` is not given.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .config import ROUTES, ConfigError, ScenarioConfig, parse_config_text
from .exceptions import NumericalError, ResolutionError, UnsupportedConfigurationError, ValidationError
from .output import write_csv, write_svg
from .presets import PRESET_NAMES, preset_description, preset_text
from .runner import run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4
JOBS_ENV = "SPINYIELD_JOBS"


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors, which matches the config exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinyield", description="Radical-pair singlet yields and their dark-state split.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", default=".", help="output directory (default: current directory)")
        p.add_argument("--route", choices=ROUTES, help="override the yield route")
        p.add_argument("--jobs", type=int, help=f"worker threads (default: ${JOBS_ENV} or 1)")

    run = sub.add_parser("run", help="run a scenario configuration file")
    run.add_argument("--config", required=True, help="configuration file")
    common(run)
    pre = sub.add_parser("preset", help="run a named figure preset")
    pre.add_argument("name", help="preset name (see list-presets)")
    common(pre)
    sub.add_parser("list-presets", help="list available presets")
    return parser


def resolve_jobs(flag: int | None, environ=os.environ) -> int:
    if flag is not None:
        jobs, source = flag, "--jobs"
    elif environ.get(JOBS_ENV):
        source = JOBS_ENV
        try:
            jobs = int(environ[JOBS_ENV])
        except ValueError:
            raise ConfigError(JOBS_ENV, f"expected an integer, got {environ[JOBS_ENV]!r}") from None
    else:
        return 1
    if jobs < 1:
        raise ConfigError(source, f"must be at least 1, got {jobs}")
    return jobs


def _execute(config_text: str, out_dir: Path, route: str | None, jobs: int, write_config: bool) -> None:
    config = ScenarioConfig.from_mapping(parse_config_text(config_text))
    with np.errstate(all="raise"):
        try:
            table = run_scenario(config, jobs=jobs, route=route)
        except FloatingPointError as exc:
            raise NumericalError(str(exc)) from exc
    out_dir.mkdir(parents=True, exist_ok=True)
    if write_config:
        (out_dir / f"{config.name}.conf").write_text(config_text, encoding="utf-8")
    csv_path = write_csv(table, out_dir / config.output_csv)
    svg_path = write_svg(table, out_dir / config.output_svg, title=config.name)
    print(f"wrote {csv_path} and {svg_path} ({len(table.rows)} rows, {table.wall_time:.2f} s)", file=sys.stderr)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list-presets":
            for name in PRESET_NAMES:
                print(f"{name:8s} {preset_description(name)}")
            return EXIT_OK
        jobs = resolve_jobs(args.jobs)
        if args.command == "preset":
            text, write_config = preset_text(args.name), True
        else:
            text, write_config = Path(args.config).read_text(encoding="utf-8"), False
        _execute(text, Path(args.out), args.route, jobs, write_config)
        return EXIT_OK
    except (ResolutionError, NumericalError, np.linalg.LinAlgError) as exc:
        print(f"spinyield: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValidationError, UnsupportedConfigurationError) as exc:
        print(f"spinyield: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"spinyield: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
