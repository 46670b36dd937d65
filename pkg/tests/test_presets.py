import pytest

from spinyield.config import ConfigError, parse_config_text
from spinyield.presets import PRESET_NAMES, preset, preset_description, preset_text
from spinyield.runner import resolve_engine, resolve_route
from spinyield.units import LAMBDA


def test_all_presets_validate():
    assert set(PRESET_NAMES) == {"fig1", "fig2a", "fig2b", "fig3", "figA1", "figA2", "figA3", "figA4"}
    for name in PRESET_NAMES:
        c = preset(name)
        assert c.name == name
        assert len(c.thetas) == 91
        assert c.k == 1e4 and c.b0 == pytest.approx(46e-6) or c.sweep_key == "field.b0"
        assert preset_description(name)


def test_preset_text_round_trips():
    for name in PRESET_NAMES:
        raw = parse_config_text(preset_text(name))
        assert raw["name"] == name and raw["schema"] == "1"


def test_unknown_preset_lists_names():
    with pytest.raises(ConfigError, match="fig1"):
        preset("fig9")


def test_noise_presets_use_resolvent_route():
    for name in ("fig2a", "fig2b", "fig3"):
        c = preset(name)
        assert len(c.sweep_values) == 5
        for label, variant in c.variants():
            if label != "0 k":
                assert resolve_route(variant) == "resolvent"


def test_multi_nucleus_presets_use_collective_engine():
    c = preset("figA1")
    engines = [resolve_engine(v) for _, v in c.variants()]
    assert engines == ["full", "collective", "collective", "collective"]
    assert c.tensors[0].az == pytest.approx(2.5 * LAMBDA)


def test_rf_preset():
    c = preset("figA3")
    assert c.sweep_values == ("0 nT", "150 nT")
    assert c.rf is not None and c.rf.alpha is None
