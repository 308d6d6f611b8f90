"""Run configuration: pydantic schema, presets and command-line flag parsing.

A configuration is assembled from three layers, lowest first: a figure preset,
a JSON file and command-line flags. The merged dictionary is validated once
by :class:`RunConfig` before any computation starts.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from two_photon_cqed.metrics import TargetState, target_epr, target_w_two_photon, target_w_zeta
from two_photon_cqed.protocol import (
    DEFAULT_N_MAX,
    ProtocolSpec,
    epr_protocol,
    w_protocol,
)
from two_photon_cqed.types import (
    AtomLevel,
    CavityPass,
    ConfigError,
    FrequencyConvention,
    Objective,
    PhysicalParams,
)

# g₁ = g₂ = 17.5 per μs and δ = 30g, Rydberg atoms with principal number near 90
RYDBERG_N90 = {"g": 17.5, "delta_over_g": 30.0}

PARAMETER_PRESETS: dict[str, dict[str, float]] = {
    "rydberg_n90": RYDBERG_N90,
    "paper2009": RYDBERG_N90,
}

ParamsPresetName = Literal["rydberg_n90", "paper2009"]

PresetName = Literal["epr", "w"]
FormatName = Literal["csv", "json"]


class _Frozen(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ParamsConfig(_Frozen):
    """Couplings and detuning, absolute or relative to a common coupling ``g``.

    ``g1``/``g2`` default to ``g``; ``delta`` defaults to ``delta_over_g · g``.
    """

    preset: ParamsPresetName | None = "rydberg_n90"
    g: float | None = Field(default=None, ge=0)
    g1: float | None = Field(default=None, ge=0)
    g2: float | None = Field(default=None, ge=0)
    delta: float | None = None
    delta_over_g: float | None = None
    convention: FrequencyConvention = FrequencyConvention.ANGULAR

    def to_params(self) -> PhysicalParams:
        defaults = PARAMETER_PRESETS.get(self.preset or "", {})
        g = self.g if self.g is not None else defaults.get("g")
        g1 = self.g1 if self.g1 is not None else g
        g2 = self.g2 if self.g2 is not None else g
        if g1 is None or g2 is None:
            raise ConfigError("params need g1 and g2 (or g, or a preset)")

        if self.delta is not None:
            delta = self.delta
        else:
            ratio = self.delta_over_g if self.delta_over_g is not None else defaults.get("delta_over_g")
            if ratio is None or g is None:
                raise ConfigError("params need delta, or delta_over_g with g")
            delta = ratio * g
        return PhysicalParams(g1=g1, g2=g2, delta=delta, convention=self.convention)


class ProtocolConfig(_Frozen):
    """Explicit protocol: cavities visited in order, numbered from 1."""

    n_cavities: int = Field(ge=1)
    cavities: list[int] = Field(min_length=1)
    initial_atom: AtomLevel = AtomLevel.E
    detection: AtomLevel | None = AtomLevel.G
    n_max: int = Field(default=DEFAULT_N_MAX, ge=2)

    @model_validator(mode="after")
    def _cavities_in_range(self) -> ProtocolConfig:
        for cavity in self.cavities:
            if not 1 <= cavity <= self.n_cavities:
                raise ValueError(f"cavity {cavity} outside 1..{self.n_cavities}")
        return self


class TargetConfig(_Frozen):
    kind: Literal["epr", "w", "w_zeta"]
    zeta: float = Field(default=0.0, ge=0)
    gamma: float = 0.0
    delta_phase: float = 0.0

    def to_target(self) -> TargetState:
        if self.kind == "epr":
            return target_epr()
        if self.kind == "w":
            return target_w_two_photon()
        return target_w_zeta(self.zeta, self.gamma, self.delta_phase)


class GridConfig(_Frozen):
    """``points`` evenly spaced times from ``start`` to ``stop`` inclusive, in μs."""

    start: float = Field(ge=0)
    stop: float = Field(ge=0)
    points: int = Field(ge=1)

    @model_validator(mode="after")
    def _ordered(self) -> GridConfig:
        if self.stop < self.start:
            raise ValueError(f"grid stop {self.stop} precedes start {self.start}")
        return self

    def values(self) -> list[float]:
        if self.points == 1:
            return [self.start]
        return [float(value) for value in np.linspace(self.start, self.stop, self.points)]


class RunConfig(_Frozen):
    """Everything one command needs; times are in μs."""

    params: ParamsConfig = ParamsConfig()
    preset: PresetName | None = None
    protocol: ProtocolConfig | None = None
    times: dict[str, float] = Field(default_factory=dict)
    grids: dict[str, GridConfig] = Field(default_factory=dict)
    curves: list[dict[str, float]] = Field(default_factory=list)
    bounds: dict[str, tuple[float, float]] = Field(default_factory=dict)
    objective: Objective = Objective.FIDELITY
    target: TargetConfig | None = None
    min_probability: float | None = Field(default=None, ge=0, le=1)
    coarse_points: int = Field(default=64, ge=1)
    figure: str | None = None
    out: Path | None = None
    format: FormatName = "csv"

    @model_validator(mode="after")
    def _consistent(self) -> RunConfig:
        if (self.preset is None) == (self.protocol is None):
            raise ValueError("exactly one of 'preset' and 'protocol' is required")
        if self.protocol is not None and self.target is None:
            raise ValueError("an explicit protocol needs a 'target'")

        variables = set(self.time_variables)
        named = [*self.times, *self.grids, *self.bounds]
        named.extend(name for curve in self.curves for name in curve)
        unknown = sorted(set(named) - variables)
        if unknown:
            raise ValueError(f"unknown time variables {unknown}; expected {sorted(variables)}")

        fixed = [*self.times.values(), *(value for curve in self.curves for value in curve.values())]
        if any(value < 0 for value in fixed):
            raise ValueError("times must be nonnegative")
        for name, (low, high) in self.bounds.items():
            if low < 0 or high < low:
                raise ValueError(f"invalid bounds for {name}: [{low}, {high}]")
        return self

    @property
    def n_passes(self) -> int:
        if self.protocol is not None:
            return len(self.protocol.cavities)
        return 2 if self.preset == "epr" else 3

    @property
    def time_variables(self) -> tuple[str, ...]:
        return tuple(f"t{index + 1}" for index in range(self.n_passes))

    def physical_params(self) -> PhysicalParams:
        return self.params.to_params()

    def protocol_spec(self) -> ProtocolSpec:
        """Protocol with the fixed ``times`` applied (missing times are 0)."""
        params = self.physical_params()
        if self.protocol is None:
            template = epr_protocol(params) if self.preset == "epr" else w_protocol(params)
        else:
            template = ProtocolSpec(
                params=params,
                n_cavities=self.protocol.n_cavities,
                passes=tuple(CavityPass(cavity - 1, 0.0) for cavity in self.protocol.cavities),
                initial_atom=self.protocol.initial_atom,
                detection=self.protocol.detection,
                n_max=self.protocol.n_max,
            )
        return template.with_durations([self.times.get(name, 0.0) for name in self.time_variables])

    def target_state(self) -> TargetState:
        if self.target is not None:
            return self.target.to_target()
        return target_epr() if self.preset == "epr" else target_w_two_photon()

    def grid_values(self) -> dict[str, list[float]]:
        return {name: grid.values() for name, grid in self.grids.items()}

    def effective(self) -> dict[str, Any]:
        """JSON-ready dump of the validated configuration."""
        return self.model_dump(mode="json", exclude_none=True)


# Figure presets seed a sweep; file and flag values override them.
FIGURE_PRESETS: dict[str, dict[str, Any]] = {
    "epr-surface": {
        "preset": "epr",
        "grids": {
            "t1": {"start": 0.0, "stop": 10.0, "points": 101},
            "t2": {"start": 0.0, "stop": 10.0, "points": 101},
        },
    },
    "epr-t2-curves": {
        "preset": "epr",
        "curves": [{"t1": 2.0}, {"t1": 5.0}],
        "grids": {"t2": {"start": 0.0, "stop": 10.0, "points": 201}},
    },
    "epr-no-detection": {
        "preset": "epr",
        "objective": "fidelity_no_detection",
        "grids": {
            "t1": {"start": 0.0, "stop": 40.0, "points": 201},
            "t2": {"start": 0.0, "stop": 40.0, "points": 201},
        },
    },
    "w-t3-detected": {
        "preset": "w",
        "curves": [{"t1": 4.0, "t2": 4.0}, {"t1": 7.0, "t2": 7.0}],
        "grids": {"t3": {"start": 0.0, "stop": 40.0, "points": 201}},
    },
    "w-t3-no-detection": {
        "preset": "w",
        "objective": "fidelity_no_detection",
        "curves": [
            {"t1": 16.0, "t2": 16.0},
            {"t1": 2.0, "t2": 2.0},
            {"t1": 13.0, "t2": 13.0},
        ],
        "grids": {"t3": {"start": 0.0, "stop": 40.0, "points": 201}},
    },
}


def deep_merge(base: Mapping[str, Any], override: Mapping[str, Any]) -> dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``; lists are replaced."""
    merged = dict(base)
    for key, value in override.items():
        current = merged.get(key)
        if isinstance(current, Mapping) and isinstance(value, Mapping):
            merged[key] = deep_merge(current, value)
        else:
            merged[key] = value
    return merged


def load_config_file(path: Path) -> dict[str, Any]:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def _split_assignment(text: str, flag: str) -> tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip() or not value.strip():
        raise ConfigError(f"{flag} expects <var>=<value>, got {text!r}")
    return name.strip(), value.strip()


def _number(text: str, flag: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"{flag}: {text!r} is not a number") from exc


def parse_grid(text: str) -> tuple[str, dict[str, float | int]]:
    """``t1=0:10:101`` → ("t1", {"start": 0.0, "stop": 10.0, "points": 101})."""
    name, value = _split_assignment(text, "--grid")
    parts = value.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid expects <var>=<start>:<stop>:<points>, got {text!r}")
    try:
        points = int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--grid: point count {parts[2]!r} is not an integer") from exc
    return name, {
        "start": _number(parts[0], "--grid"),
        "stop": _number(parts[1], "--grid"),
        "points": points,
    }


def parse_bounds(text: str) -> tuple[str, list[float]]:
    """``t1=0:10`` → ("t1", [0.0, 10.0])."""
    name, value = _split_assignment(text, "--bounds")
    parts = value.split(":")
    if len(parts) != 2:
        raise ConfigError(f"--bounds expects <var>=<low>:<high>, got {text!r}")
    return name, [_number(part, "--bounds") for part in parts]


def parse_curve(text: str) -> dict[str, float]:
    """``t1=16,t2=16`` → {"t1": 16.0, "t2": 16.0}."""
    curve: dict[str, float] = {}
    for item in text.split(","):
        name, value = _split_assignment(item, "--curve")
        curve[name] = _number(value, "--curve")
    return curve


def build_config(file_data: Mapping[str, Any], overrides: Mapping[str, Any]) -> RunConfig:
    """Merge figure preset, file and flag layers, then validate.

    Raises:
        ConfigError: unknown figure preset.
        pydantic.ValidationError: schema or consistency violations.
    """
    merged = deep_merge(file_data, overrides)
    figure = merged.get("figure")
    if figure is not None:
        if figure not in FIGURE_PRESETS:
            raise ConfigError(
                f"unknown figure preset {figure!r}; choose from {sorted(FIGURE_PRESETS)}"
            )
        merged = deep_merge(FIGURE_PRESETS[figure], merged)
    return RunConfig.model_validate(merged)


__all__ = [
    "FIGURE_PRESETS",
    "GridConfig",
    "ParamsConfig",
    "ProtocolConfig",
    "RunConfig",
    "TargetConfig",
    "ValidationError",
    "build_config",
    "deep_merge",
    "load_config_file",
    "parse_bounds",
    "parse_curve",
    "parse_grid",
]
