import os
import subprocess
import sys

import pytest

from spinyield.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, build_parser, main, resolve_jobs
from spinyield.config import ConfigError
from spinyield.presets import PRESET_NAMES

SMALL = """\
schema = 1
name = small
system.n_nuclei = 1
system.tensor = 3 lambda, 3 lambda, 5 lambda
field.b0 = 46 uT
field.theta.values = 0 deg, 30 deg, 60 deg, 90 deg
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "small.conf"
    path.write_text(SMALL, encoding="utf-8")
    return path


def test_run_writes_outputs(config_file, tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", str(config_file), "--out", str(out)]) == 0
    assert (out / "small.csv").exists() and (out / "small.svg").exists()


def test_route_override_recorded(config_file, tmp_path):
    assert main(["run", "--config", str(config_file), "--out", str(tmp_path), "--route", "resolvent"]) == 0
    assert "# route: resolvent" in (tmp_path / "small.csv").read_text()


def test_list_presets(capsys):
    assert main(["list-presets"]) == 0
    out = capsys.readouterr().out
    for name in PRESET_NAMES:
        assert name in out


def test_preset_writes_config(tmp_path):
    assert main(["preset", "fig1", "--out", str(tmp_path), "--jobs", "2"]) == 0
    assert (tmp_path / "fig1.conf").read_text().startswith("schema = 1\nname = fig1\n")
    assert main(["run", "--config", str(tmp_path / "fig1.conf"), "--out", str(tmp_path / "again")]) == 0
    assert (tmp_path / "fig1.csv").read_bytes() == (tmp_path / "again" / "fig1.csv").read_bytes()


def test_config_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.conf"
    bad.write_text(SMALL + "mystery = 1\n")
    assert main(["run", "--config", str(bad)]) == EXIT_CONFIG
    assert "mystery" in capsys.readouterr().err
    assert main(["preset", "nope"]) == EXIT_CONFIG
    with pytest.raises(SystemExit) as info:
        main(["run"])
    assert info.value.code == EXIT_CONFIG
    with pytest.raises(SystemExit) as info:
        main(["run", "--config", str(bad), "--route", "warp"])
    assert info.value.code == EXIT_CONFIG


def test_io_errors_exit_4(config_file, tmp_path):
    assert main(["run", "--config", str(tmp_path / "missing.conf")]) == EXIT_IO
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["run", "--config", str(config_file), "--out", str(blocker / "sub")]) == EXIT_IO


def test_numeric_errors_exit_3(tmp_path, monkeypatch):
    from spinyield import cli
    from spinyield.exceptions import ResolutionError

    def boom(*args, **kwargs):
        raise ResolutionError("need 1000 steps")

    monkeypatch.setattr(cli, "run_scenario", boom)
    path = tmp_path / "c.conf"
    path.write_text(SMALL)
    assert main(["run", "--config", str(path), "--out", str(tmp_path)]) == EXIT_NUMERIC


def test_resolve_jobs():
    assert resolve_jobs(None, {}) == 1
    assert resolve_jobs(None, {"SPINYIELD_JOBS": "3"}) == 3
    assert resolve_jobs(2, {"SPINYIELD_JOBS": "3"}) == 2
    for bad in ("zero", "0", "-2"):
        with pytest.raises(ConfigError):
            resolve_jobs(None, {"SPINYIELD_JOBS": bad})
    with pytest.raises(ConfigError):
        resolve_jobs(0, {})


def test_env_jobs_and_bad_env(config_file, tmp_path, monkeypatch):
    monkeypatch.setenv("SPINYIELD_JOBS", "4")
    assert main(["run", "--config", str(config_file), "--out", str(tmp_path)]) == 0
    monkeypatch.setenv("SPINYIELD_JOBS", "many")
    assert main(["run", "--config", str(config_file), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_parser_commands():
    parser = build_parser()
    args = parser.parse_args(["preset", "fig2a", "--jobs", "3"])
    assert args.command == "preset" and args.name == "fig2a" and args.jobs == 3


def test_console_script_module(config_file, tmp_path):
    env = dict(os.environ, SPINYIELD_JOBS="2")
    proc = subprocess.run(
        [sys.executable, "-m", "spinyield.cli", "run", "--config", str(config_file), "--out", str(tmp_path)],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0, proc.stderr
    assert "wrote" in proc.stderr
