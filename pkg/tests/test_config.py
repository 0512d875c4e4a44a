import math

import pytest

from lsto.config import RunConfig, parse_config
from lsto.exceptions import ConfigError


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.cfg"
    path.write_text("")
    cfg = parse_config(path)
    assert (cfg.dt, cfg.tau, cfg.CdF, cfg.GvMax, cfg.epsOpt) == (0.7, 5e-4, 1.2, 0.45, 1e-3)
    assert (cfg.MaxLoop, cfg.FlagOptMax, cfg.GvLoop, cfg.StatIt) == (50000, 10, 15, 5)
    assert (cfg.LagGvA, cfg.LagGvinit, cfg.LagGvC, cfg.LagGvMax, cfg.LagGvMin) == \
        (2.0, 1.0, 1.0, 5.0, 0.1)
    assert (cfg.matw, cfg.matd, cfg.E, cfg.nu, cfg.L) == (0.8, 1e-3, 2.1e11, 0.3, 1.0)
    assert math.isinf(cfg.SwitchBackIt)
    p = cfg.opt_params()
    assert p.evolution.tau == 5e-4 and p.multiplier.GvMax == 0.45


def test_command_line_overrides_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("method = rd  # comment\n\ndt=0.5\n")
    cfg = parse_config(path, ["method=nlhp"])
    assert cfg.method == "nlhp" and cfg.dt == 0.5


def test_negative_tau_names_key():
    with pytest.raises(ConfigError) as exc:
        parse_config(None, ["tau=-1"])
    assert exc.value.key == "tau"


@pytest.mark.parametrize("item,key", [
    ("bogus=1", "bogus"), ("dt=fast", "dt"), ("MaxLoop=1.5", "MaxLoop"),
    ("model=wing", "model"), ("matd=1.5", "matd"), ("nu=0.5", "nu"),
])
def test_bad_values(item, key):
    with pytest.raises(ConfigError) as exc:
        parse_config(None, [item])
    assert exc.value.key == key


def test_cross_field_invariant():
    with pytest.raises(ConfigError):
        parse_config(None, ["MaxLoop=10"])
    with pytest.raises(ConfigError):
        parse_config(None, ["LagGvinit=9"])


def test_model_presets():
    b = parse_config(None, ["model=bridge"])
    assert (b.tau, b.GvMax, b.epsOpt) == (8e-5, 0.35, 1e-2) and math.isinf(b.SwitchBackIt)
    r = parse_config(None, ["model=radiator"])
    assert (r.tau, r.GvMax, r.epsOpt, r.SwitchBackIt) == (2e-5, 0.5, 1e-2, 15)
    assert parse_config(None, ["model=radiator", "init=upper"]).SwitchBackIt == 50
    # explicit values beat presets
    assert parse_config(None, ["model=bridge", "tau=1e-3"]).tau == 1e-3


def test_geometry_overrides():
    cfg = parse_config(None, ["model=radiator", "height=0.5", "cells_per_unit=40", "resMesh=4"])
    _, mesh = cfg.build_model()
    assert mesh.bounding_box()[1][1] == 0.5
    with pytest.raises(ConfigError) as exc:
        parse_config(None, ["height=0.5"])
    assert exc.value.key == "height"


def test_malformed_line(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("dt 0.7\n")
    with pytest.raises(ConfigError):
        parse_config(path)


def test_defaults_dataclass_roundtrip():
    assert parse_config(None) == RunConfig()
