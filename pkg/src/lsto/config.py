"""Flat ``key = value`` run configuration with model presets.

Precedence, lowest first: built-in defaults, model presets, config file,
command-line overrides. Model presets only fill keys that neither the file
nor the command line set.
"""
import math
from dataclasses import dataclass, fields, replace

from .elasticity import MaterialData
from .evolution import EvolutionParams
from .exceptions import ConfigError
from .levelset import SmoothingParams
from .mesh2d import build_model
from .multiplier import MultiplierParams
from .optimizer import OptParams


@dataclass(frozen=True)
class RunConfig:
    model: str = "cantilever"
    method: str = "nlhp"
    init: str = "perforated"
    resMesh: int = 4
    upper_threshold: float = 0.4
    boundary: str = "phione"
    E: float = 2.1e11
    nu: float = 0.3
    gx: float = 0.0
    gy: float = -1.0e3
    matw: float = 0.8
    matd: float = 1e-3
    MaxLoop: int = 50000
    epsOpt: float = 1e-3
    FlagOptMax: int = 10
    GvMax: float = 0.45
    GvLoop: int = 15
    LagGvA: float = 2.0
    LagGvinit: float = 1.0
    LagGvC: float = 1.0
    LagGvMax: float = 5.0
    LagGvMin: float = 0.1
    dt: float = 0.7
    tau: float = 5e-4
    L: float = 1.0
    CdF: float = 1.2
    StatIt: int = 5
    SwitchBackIt: float = math.inf
    state_tol: float = 1e-10
    evolution_tol: float = 1e-10
    # bridge/radiator geometry; None keeps the model default
    width: float = None
    height: float = None
    support: float = None
    load: float = None
    cells_per_unit: float = None
    out: str = "out"
    snapshot_stride: int = 0
    record_timing: bool = True

    def geometry(self):
        return {k: getattr(self, k) for k in GEOMETRY_KEYS if getattr(self, k) is not None}

    def build_model(self):
        return build_model(self.model, self.resMesh, **self.geometry())

    def opt_params(self):
        return OptParams(
            MaxLoop=self.MaxLoop,
            epsOpt=self.epsOpt,
            FlagOptMax=self.FlagOptMax,
            method=self.method,
            multiplier=MultiplierParams(self.GvMax, self.GvLoop, self.LagGvA, self.LagGvinit,
                                        self.LagGvC, self.LagGvMax, self.LagGvMin),
            evolution=EvolutionParams(self.dt, self.tau, self.L, self.CdF, self.StatIt,
                                      self.SwitchBackIt, self.boundary, self.evolution_tol),
            smoothing=SmoothingParams(self.matw, self.matd),
            material=MaterialData(self.E, self.nu, (self.gx, self.gy)),
            state_tol=self.state_tol,
            record_timing=self.record_timing,
        )


CHOICES = {
    "model": ("cantilever", "bridge", "radiator"),
    "method": ("rd", "nlhp"),
    "init": ("perforated", "full", "upper"),
    "boundary": ("phione", "homogeneous"),
}
POSITIVE = {"E", "matw", "matd", "MaxLoop", "epsOpt", "GvMax", "GvLoop", "LagGvA", "LagGvinit",
            "LagGvC", "LagGvMax", "LagGvMin", "dt", "tau", "L", "CdF", "StatIt",
            "SwitchBackIt", "state_tol", "evolution_tol", "resMesh"}
GEOMETRY_KEYS = ("width", "height", "support", "load", "cells_per_unit")
POSITIVE |= set(GEOMETRY_KEYS)
NON_NEGATIVE = {"FlagOptMax", "snapshot_stride"}
OPEN_UNIT = {"matd", "state_tol", "evolution_tol"}

# (model, init) -> preset overrides; None matches any init
PRESETS = {
    ("cantilever", None): {"tau": 5e-4, "GvMax": 0.45, "epsOpt": 1e-3},
    ("bridge", None): {"tau": 8e-5, "GvMax": 0.35, "epsOpt": 1e-2},
    ("radiator", None): {"tau": 2e-5, "GvMax": 0.5, "epsOpt": 1e-2},
    ("radiator", "perforated"): {"SwitchBackIt": 15},
    ("radiator", "full"): {"SwitchBackIt": 50},
    ("radiator", "upper"): {"SwitchBackIt": 50},
}

_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key, text):
    typ = _TYPES[key]
    text = text.strip()
    try:
        if typ is bool:
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if typ is int:
            return int(text)
        if typ is float:
            return float(text)
        return text
    except ValueError:
        raise ConfigError(key, f"malformed value {text!r} (expected {typ.__name__})") from None


def _validate(key, value):
    if key in CHOICES and value not in CHOICES[key]:
        raise ConfigError(key, f"must be one of {CHOICES[key]}, got {value!r}")
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if math.isnan(value):
            raise ConfigError(key, "must not be NaN")
        if key in POSITIVE and not value > 0:
            raise ConfigError(key, f"must be positive, got {value}")
        if key in NON_NEGATIVE and value < 0:
            raise ConfigError(key, f"must be non-negative, got {value}")
        if key in OPEN_UNIT and not value < 1:
            raise ConfigError(key, f"must be below 1, got {value}")
        if key == "nu" and not -1.0 < value < 0.5:
            raise ConfigError(key, f"must lie in (-1, 0.5), got {value}")
        if key == "matw" and value > 1:
            raise ConfigError(key, f"must not exceed 1, got {value}")


def parse_text(text, source="<config>"):
    """Parse ``key = value`` lines into a dict of typed values."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"{source}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(key, f"{source}:{lineno}: unknown key")
        values[key] = _convert(key, value)
    return values


def parse_overrides(items):
    """Parse ``key=value`` strings (or a mapping) from the command line."""
    if isinstance(items, dict):
        out = {}
        for key, value in items.items():
            if key not in _TYPES:
                raise ConfigError(key, "unknown key")
            out[key] = _convert(key, str(value)) if isinstance(value, str) else value
        return out
    return parse_text("\n".join(items), source="<command line>")


def build_config(file_values=None, overrides=None):
    """Merge defaults, presets, file values and overrides, then validate."""
    explicit = dict(file_values or {})
    explicit.update(overrides or {})
    model = explicit.get("model", RunConfig.model)
    init = explicit.get("init", RunConfig.init)
    merged = {}
    for (m, i), preset in PRESETS.items():
        if m == model and i in (None, init):
            merged.update(preset)
    merged.update(explicit)
    for key, value in merged.items():
        _validate(key, value)
    cfg = replace(RunConfig(), **merged)
    allowed = {"cantilever": (), "bridge": GEOMETRY_KEYS,
               "radiator": ("width", "height", "load", "cells_per_unit")}[cfg.model]
    for key in cfg.geometry():
        if key not in allowed:
            raise ConfigError(key, f"not a geometry parameter of the {cfg.model} model")
    try:
        cfg.opt_params()
    except ValueError as exc:
        raise ConfigError("config", str(exc)) from None
    return cfg


def parse_config(path=None, overrides=None):
    """Read a config file (optional) and apply command-line overrides."""
    file_values = {}
    if path is not None:
        with open(path) as fh:
            file_values = parse_text(fh.read(), source=str(path))
    return build_config(file_values, parse_overrides(overrides or {}))
