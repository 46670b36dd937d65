import xml.etree.ElementTree as ET

import numpy as np
import pytest

from spinyield.config import ScenarioConfig, parse_config_text
from spinyield.output import format_csv, format_number, read_csv, render_svg, write_csv, write_svg
from spinyield.runner import COLUMNS, run_scenario

TEXT = """\
schema = 1
name = small
system.n_nuclei = 1
system.tensor = 3 lambda, 3 lambda, 5 lambda
field.b0 = 46 uT
field.theta.start = 0 deg
field.theta.stop = 90 deg
field.theta.count = 7
"""

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def table():
    return run_scenario(ScenarioConfig.from_mapping(parse_config_text(TEXT)))


@pytest.fixture(scope="module")
def swept():
    text = TEXT + "sweep.key = field.b0\nsweep.values = 32.2 uT; 46 uT\n"
    return run_scenario(ScenarioConfig.from_mapping(parse_config_text(text)))


def test_number_format():
    assert format_number(1 / 3) == "0.333333333333"
    assert format_number(0.0) == "0"
    assert format_number(1.5e-13) == "1.5e-13"


def test_csv_layout(table):
    text = format_csv(table)
    assert "\r" not in text and text.endswith("\n")
    lines = text.split("\n")
    meta = [l for l in lines if l.startswith("#")]
    assert meta[0] == "# generator: spinyield 0.1.0"
    assert "# engine: full" in meta and "# route: spectral" in meta
    assert lines[len(meta)] == ",".join(COLUMNS)
    assert len([l for l in lines if l and not l.startswith("#")]) == 1 + 7


def test_csv_round_trip(table, tmp_path):
    path = write_csv(table, tmp_path / "t.csv")
    meta, header, rows = read_csv(path)
    assert header == list(COLUMNS)
    assert len(rows) == len(table.rows)
    for got, want in zip(rows, table.rows):
        for g, w in zip(got, want):
            assert format_number(g) == format_number(w)
            assert g == pytest.approx(w, rel=1e-11, abs=1e-300)
    assert path.read_bytes() == format_csv(table).encode("utf-8")


def test_series_column(swept, tmp_path):
    assert swept.columns[0] == "series"
    assert swept.series == ("32.2 uT", "46 uT")
    _, header, rows = read_csv(write_csv(swept, tmp_path / "s.csv"))
    assert header[0] == "series"
    assert {r[0] for r in rows} == {"32.2 uT", "46 uT"}
    assert len(swept.column("phi_s", "46 uT")) == 7
    assert not np.allclose(swept.column("phi_s", "46 uT"), swept.column("phi_s", "32.2 uT"))


def test_svg_is_valid_xml(table, swept, tmp_path):
    for t, n_lines in ((table, 3), (swept, 6)):
        path = write_svg(t, tmp_path / "plot.svg", title="a < b & c")
        root = ET.parse(path).getroot()
        assert root.tag == f"{SVG}svg"
        polylines = root.findall(f"{SVG}polyline")
        assert len(polylines) == n_lines
        for p in polylines:
            assert len(p.get("points").split()) == 7
        labels = [e.text for e in root.iter(f"{SVG}text")]
        assert "theta (deg)" in labels and "yield" in labels


def test_svg_is_deterministic(table):
    assert render_svg(table, "x") == render_svg(table, "x")


def test_read_csv_rejects_headerless(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# only metadata\n")
    with pytest.raises(ValueError):
        read_csv(path)
