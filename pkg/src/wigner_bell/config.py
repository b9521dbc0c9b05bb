"""Run configuration (a single JSON document) and the figure presets.

Every field has a default, so ``{}`` is a valid config::

    {
      "scenario":  {"family": "ghz", "setting": "two-opposite",
                    "theta_m": 0.785398, "theta_s": 0.785398, "phi_s": 0.785398},
      "sweep":     {"mode": "omega", "omega_min": 0.0, "omega_max": 1.569225, "steps": 64,
                    "particle_speed": 0.9, "observer_speed_min": 0.0, "observer_speed_max": 0.99},
      "optimizer": {"multistarts": 24, "max_iters": 2000, "tol": 1e-9, "seed": 7,
                    "method": "seesaw"},
      "output":    {"dir": "results", "name": "run", "format": "csv", "svg": false}
    }

``sweep.mode`` is ``"omega"`` (grid directly over the Wigner angle) or
``"speed"`` (fixed particle speed, grid over the observer speed, each point
converted to its Wigner angle). Angles are radians throughout.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from .bell import OptimizerOptions
from .scenario import (
    MomentumScenario,
    MomentumSetting,
    make_generalized_ghz_spin,
    make_generalized_w_spin,
    make_scenario,
    omega_from_speeds,
)

PI = math.pi
DEFAULT_OMEGA_MAX = PI / 2 * 0.999


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ScenarioSpec:
    family: str = "ghz"
    setting: str = "two-opposite"
    theta_m: float = PI / 4
    theta_s: float = PI / 4
    phi_s: float = PI / 4

    def build(self) -> MomentumScenario:
        n = MomentumSetting(self.setting).n_qubits
        if self.family == "ghz":
            spin = make_generalized_ghz_spin(n, self.theta_s)
        else:
            spin = make_generalized_w_spin(self.theta_s, self.phi_s)
        return make_scenario(self.setting, self.theta_m, spin)


@dataclass(frozen=True)
class SweepSpec:
    mode: str = "omega"
    omega_min: float = 0.0
    omega_max: float = DEFAULT_OMEGA_MAX
    steps: int = 64
    particle_speed: float = 0.9
    observer_speed_min: float = 0.0
    observer_speed_max: float = 0.99

    def grid(self) -> np.ndarray:
        if self.mode == "omega":
            return np.linspace(self.omega_min, self.omega_max, self.steps)
        speeds = np.linspace(self.observer_speed_min, self.observer_speed_max, self.steps)
        return np.array([omega_from_speeds(self.particle_speed, v) for v in speeds])


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "results"
    name: str = "run"
    format: str = "csv"
    svg: bool = False


@dataclass(frozen=True)
class RunConfig:
    scenario: ScenarioSpec = field(default_factory=ScenarioSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    output: OutputSpec = field(default_factory=OutputSpec)

    def to_dict(self) -> dict:
        return asdict(self)


_SECTIONS = {
    "scenario": ScenarioSpec,
    "sweep": SweepSpec,
    "optimizer": OptimizerOptions,
    "output": OutputSpec,
}


def _coerce(section: str, name: str, value: Any, default: Any) -> Any:
    where = f"{section}.{name}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(where, f"expected true/false, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(where, f"expected an integer, got {value!r}")
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(where, f"expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError(where, "must be finite")
        return value
    if not isinstance(value, str):
        raise ConfigError(where, f"expected a string, got {value!r}")
    return value


def _build_section(section: str, raw: Any):
    cls = _SECTIONS[section]
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(section, "expected an object")
    defaults = cls()
    known = {f.name for f in fields(cls)}
    for key in raw:
        if key not in known:
            raise ConfigError(f"{section}.{key}", "unknown field")
    kwargs = {
        name: _coerce(section, name, raw[name], getattr(defaults, name))
        for name in known
        if name in raw
    }
    try:
        return cls(**kwargs)
    except ValueError as exc:
        # OptimizerOptions validates itself; map its message onto the section.
        raise ConfigError(section, str(exc)) from None


def _validate(cfg: RunConfig) -> None:
    sc, sw, out = cfg.scenario, cfg.sweep, cfg.output
    if sc.family not in ("ghz", "w"):
        raise ConfigError("scenario.family", f"expected 'ghz' or 'w', got {sc.family!r}")
    valid = [s.value for s in MomentumSetting]
    if sc.setting not in valid:
        raise ConfigError("scenario.setting", f"expected one of {valid}, got {sc.setting!r}")
    if sc.family == "w" and MomentumSetting(sc.setting).n_qubits != 3:
        raise ConfigError("scenario.family", "the W family needs a three-qubit setting")

    if sw.mode not in ("omega", "speed"):
        raise ConfigError("sweep.mode", f"expected 'omega' or 'speed', got {sw.mode!r}")
    if sw.steps < 1:
        raise ConfigError("sweep.steps", "must be >= 1")
    if sw.mode == "omega":
        for name in ("omega_min", "omega_max"):
            v = getattr(sw, name)
            if not 0.0 <= v < PI / 2:
                raise ConfigError(f"sweep.{name}", f"{v} outside [0, pi/2)")
        if sw.omega_max < sw.omega_min:
            raise ConfigError("sweep.omega_max", "must be >= omega_min")
    else:
        for name in ("particle_speed", "observer_speed_min", "observer_speed_max"):
            v = getattr(sw, name)
            if not 0.0 <= v < 1.0:
                raise ConfigError(f"sweep.{name}", f"{v} outside [0, 1)")
        if sw.observer_speed_max < sw.observer_speed_min:
            raise ConfigError("sweep.observer_speed_max", "must be >= observer_speed_min")

    if out.format not in ("csv", "json"):
        raise ConfigError("output.format", f"expected 'csv' or 'json', got {out.format!r}")
    if not out.name or "/" in out.name:
        raise ConfigError("output.name", "must be a plain file stem")


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config", "top level must be a JSON object")
    for key in raw:
        if key not in _SECTIONS:
            raise ConfigError(key, "unknown section")
    cfg = RunConfig(**{name: _build_section(name, raw.get(name)) for name in _SECTIONS})
    _validate(cfg)
    return cfg


def load_config(path: str | Path) -> RunConfig:
    """Read and validate a JSON config. I/O problems propagate as ``OSError``."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON: {exc}") from None
    return config_from_dict(raw)


# -- figure presets -------------------------------------------------------------


@dataclass(frozen=True)
class Curve:
    name: str
    label: str
    scenario: ScenarioSpec


_THETA_LABELS = [("pi4", PI / 4), ("pi8", PI / 8), ("pi16", PI / 16)]
_W_PAIRS = [
    ("equal", math.acos(1 / math.sqrt(3)), PI / 4),
    ("7pi16-pi4", 7 * PI / 16, PI / 4),
    ("7pi16-pi16", 7 * PI / 16, PI / 16),
]


def _ghz3_curves(setting: str) -> list[Curve]:
    curves = [
        Curve(
            f"left_tm-{lm}_ts-{ls}",
            f"theta_m={lm}, theta_s={ls}",
            ScenarioSpec("ghz", setting, tm, ts),
        )
        for lm, tm in _THETA_LABELS
        for ls, ts in _THETA_LABELS
    ]
    curves.append(
        Curve("right_tm-pi4_ts-pi128", "theta_m=pi4, theta_s=pi128", ScenarioSpec("ghz", setting, PI / 4, PI / 128))
    )
    return curves


def _w_curves() -> list[Curve]:
    curves = [
        Curve(
            f"left_tm-{lm}_w-{lw}",
            f"theta_m={lm}, (theta_s, phi_s)={lw}",
            ScenarioSpec("w", "three-symmetric", tm, ts, ps),
        )
        for lm, tm in _THETA_LABELS
        for lw, ts, ps in _W_PAIRS
    ]
    curves.append(
        Curve(
            "right_tm-pi4_ts-15pi32_ps-pi32",
            "theta_m=pi4, theta_s=15pi32, phi_s=pi32",
            ScenarioSpec("w", "three-symmetric", PI / 4, 15 * PI / 32, PI / 32),
        )
    )
    return curves


PRESETS: dict[str, list[Curve]] = {
    "fig1": [
        Curve("opposite_pi4_pi4", "p1=-p2, {pi4, pi4}", ScenarioSpec("ghz", "two-opposite", PI / 4, PI / 4)),
        Curve("opposite_pi4_pi16", "p1=-p2, {pi4, pi16}", ScenarioSpec("ghz", "two-opposite", PI / 4, PI / 16)),
        Curve("same_pi4_pi4", "p1=p2, {pi4, pi4}", ScenarioSpec("ghz", "two-same", PI / 4, PI / 4)),
        Curve("same_pi4_pi16", "p1=p2, {pi4, pi16}", ScenarioSpec("ghz", "two-same", PI / 4, PI / 16)),
    ],
    "fig2": _ghz3_curves("three-symmetric"),
    "fig3": _w_curves(),
    "fig4": _ghz3_curves("three-same"),
}
