import math

import numpy as np
import pytest

from spinyield.config import ConfigError, ScenarioConfig, load_config, parse_config_text
from spinyield.units import GAMMA, LAMBDA

BASE = """\
schema = 1
name = demo
system.n_nuclei = 1
system.tensor = 3 lambda, 3 lambda, 5 lambda
field.b0 = 46 uT
field.theta.values = 0 deg, 45 deg, 90 deg
"""


def build(extra="", base=BASE):
    return ScenarioConfig.from_mapping(parse_config_text(base + extra))


def test_parse_basic_values():
    c = build()
    assert c.name == "demo"
    assert c.n_nuclei == 1
    assert c.tensors[0].az == pytest.approx(5 * LAMBDA)
    assert c.b0 == pytest.approx(46e-6)
    np.testing.assert_allclose(c.thetas, [0, math.pi / 4, math.pi / 2])
    assert c.k == 1e4 and c.initial_state == "singlet" and c.route == "auto"
    assert c.output_csv == "demo.csv" and c.output_svg == "demo.svg"


def test_comments_and_blank_lines_ignored():
    assert build("\n# note\n   \n").name == "demo"


def test_theta_range_is_inclusive_and_sorted():
    text = BASE.replace("field.theta.values = 0 deg, 45 deg, 90 deg", "field.theta.start = 90 deg\nfield.theta.stop = 0 deg\nfield.theta.count = 7")
    c = build(base=text)
    assert len(c.thetas) == 7 and c.thetas[0] == 0.0 and c.thetas[-1] == pytest.approx(math.pi / 2)
    assert list(c.thetas) == sorted(c.thetas)


@pytest.mark.parametrize(
    "extra, path",
    [
        ("bogus = 1\n", "bogus"),
        ("name = again\n", "name"),
        ("k = -1\n", "k"),
        ("k = 2 k\n", "k"),
        ("initial_state = quintet\n", "initial_state"),
        ("noise.a.kind = vertical\n", "noise.a.rate"),
        ("noise.a.kind = sideways\nnoise.a.rate = 1 k\n", "noise.a.kind"),
        ("noise.a.kind = vertical\nnoise.a.rate = -1 k\n", "noise.a.rate"),
        ("noise.a.kind = vertical\nnoise.a.rate = 1 k\nroute = spectral\n", "route"),
        ("rf.omega = exact\n", "rf.b_rf"),
        ("rf.b_rf = 10 nT\nnoise.a.kind = vertical\nnoise.a.rate = 1 k\n", "rf"),
        ("rf.b_rf = 10 nT\nroute = resolvent\n", "route"),
        ("engine = collective\nsystem.tensor.1 = 1 lambda, 2 lambda, 5 lambda\n", "engine"),
        ("sweep.key = field.b0\n", "sweep.values"),
        ("sweep.values = 1; 2\n", "sweep.key"),
        ("sweep.key = name\nsweep.values = a; b\n", "sweep.key"),
        ("sweep.key = field.b0\nsweep.values = 1 uT; 1 uT\n", "sweep.values"),
        ("system.tensor.2 = 1, 1, 1\n", "system.tensor.2"),
        ("field.phi = 3 uT\n", "field.phi"),
    ],
)
@pytest.mark.filterwarnings("ignore::UserWarning")
def test_invalid_configurations_name_the_key(extra, path):
    with pytest.raises(ConfigError) as info:
        build(extra)
    assert info.value.path == path


def test_schema_and_theta_errors():
    with pytest.raises(ConfigError, match="schema"):
        build(base=BASE.replace("schema = 1", "schema = 2"))
    with pytest.raises(ConfigError, match="empty"):
        build(base=BASE.replace("field.theta.values = 0 deg, 45 deg, 90 deg", "field.theta.start = 0\nfield.theta.stop = 1\nfield.theta.count = 0"))
    with pytest.raises(ConfigError, match="distinct"):
        build(base=BASE.replace("0 deg, 45 deg", "0 deg, 0 deg"))
    with pytest.raises(ConfigError, match="line 7"):
        build("this line has no separator\n")


def test_hyperfine_noise_needs_one_nucleus():
    with pytest.raises(ConfigError):
        build("noise.h.kind = hyperfine\nnoise.h.rate = 1 k\n", base=BASE.replace("n_nuclei = 1", "n_nuclei = 2"))


def test_liouville_limit():
    with pytest.raises(ConfigError, match="Liouville"):
        build("route = resolvent\n", base=BASE.replace("n_nuclei = 1", "n_nuclei = 5"))


def test_rf_settings():
    c = build("rf.b_rf = 150 nT\n")
    assert c.rf.b_rf == pytest.approx(150e-9)
    assert c.rf.omega == pytest.approx(2 * GAMMA * 46e-6)
    assert c.rf.alpha is None
    assert build("rf.b_rf = 1 nT\nrf.omega = measured\n").rf.omega == pytest.approx(2 * math.pi * 1.315e6)
    assert build("rf.b_rf = 1 nT\nrf.alpha = 30 deg\n").rf.alpha == pytest.approx(math.pi / 6)


def test_noise_rates_in_units_of_k():
    c = build("k = 2e4\nnoise.m.kind = parallel\nnoise.m.rate = 0.5 k\n")
    assert c.noises[0].rate == pytest.approx(1e4)
    assert c.noises[0].kind == "parallel"


def test_sweep_variants():
    c = build("sweep.key = system.n_nuclei\nsweep.values = 1; 2\n")
    labels = [label for label, _ in c.variants()]
    assert labels == ["1", "2"]
    assert [v.n_nuclei for _, v in c.variants()] == [1, 2]
    assert build().variants() == [(None, build())]


def test_sweep_values_are_validated_eagerly():
    with pytest.raises(ConfigError):
        build("sweep.key = k\nsweep.values = 1e4; -3\n")


def test_route_override_and_round_trip():
    c = build("route = quadrature\n")
    assert c.with_route("resolvent").route == "resolvent"
    again = ScenarioConfig.from_mapping(parse_config_text(c.to_text()))
    assert again == c


def test_load_config(tmp_path):
    path = tmp_path / "demo.conf"
    path.write_text(BASE, encoding="utf-8")
    assert load_config(path).name == "demo"
    with pytest.raises(OSError):
        load_config(tmp_path / "missing.conf")
