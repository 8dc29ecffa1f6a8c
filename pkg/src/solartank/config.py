"""Run configuration: nested dataclasses with JSON load/dump.

An empty JSON object gives the experimental rig: a 1.7 m x 0.35 m tank in
12 sectors, three 10 m copper coils of which the bottom one is open, and
a 2 m2 flat-plate collector.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .collector import CollectorParams, PumpControl, PumpMode
from .consumption import ConsumptionSchedule
from .correlations import LayerCorrelation
from .properties import evaluators
from .serpentine import PLACEMENTS, IterationConfig, SerpentineLayout, build_layout
from .tank import ConvectionSettings, TankGeometry


class ConfigError(ValueError):
    """Invalid configuration; ``errors`` lists every violation found."""

    def __init__(self, errors: list[str]):
        super().__init__("invalid configuration:\n  " + "\n  ".join(errors))
        self.errors = list(errors)


@dataclass(frozen=True)
class TankSection:
    height: float = 1.7
    diameter: float = 0.35
    sector_count: int = 12
    loss_coeff: float = 0.8  # W/(m2 K)
    ambient_temp: float | None = None  # None: use the weather ambient

    def geometry(self) -> TankGeometry:
        return TankGeometry(self.height, self.diameter, self.sector_count, self.loss_coeff)


@dataclass(frozen=True)
class SerpentineSection:
    placement: str = "bottom"
    coil_length: float = 10.0  # m per coil
    inner_diameter: float = 0.013
    outer_diameter: float = 0.015
    wall_conductivity: float = 380.0

    def __post_init__(self):
        if self.placement not in PLACEMENTS:
            raise ValueError(f"placement must be one of {', '.join(PLACEMENTS)}; got {self.placement!r}")
        if self.coil_length <= 0:
            raise ValueError("coil_length must be positive")


@dataclass(frozen=True)
class CollectorSection:
    area: float = 2.0
    heat_removal_factor: float = 0.85
    transmittance_absorptance: float = 0.80
    loss_coeff: float = 5.0
    pipe_loss: float = 0.0  # W/K per leg

    def __post_init__(self):
        if self.pipe_loss < 0:
            raise ValueError("pipe_loss must be >= 0")

    def params(self) -> CollectorParams:
        return CollectorParams(self.area, self.heat_removal_factor, self.transmittance_absorptance, self.loss_coeff)


@dataclass(frozen=True)
class SimulationConfig:
    time_step: float = 600.0  # s
    duration_days: float = 5.0
    warmup_days: float = 5.0
    correlation: LayerCorrelation = LayerCorrelation.LAMINAR_TURBULENT
    layer_length: str = "height"
    convection_substeps: int | None = None
    flow_rate: float = 0.025  # kg/s
    constant_properties: bool = False
    initial_tank_temp: float | tuple[float, ...] | None = None  # None: mains temperature

    def __post_init__(self):
        errors = []
        if not isinstance(self.correlation, LayerCorrelation):
            try:
                object.__setattr__(self, "correlation", LayerCorrelation(self.correlation))
            except ValueError:
                errors.append(f"correlation {self.correlation!r} is not one of {', '.join(m.value for m in LayerCorrelation)}")
        if self.time_step <= 0:
            errors.append("time_step must be positive")
        if self.warmup_days < 0:
            errors.append("warmup_days must be >= 0")
        if self.duration_days < 1:
            errors.append("duration_days must be at least 1")
        if self.flow_rate <= 0:
            errors.append("flow_rate must be positive")
        if self.layer_length not in ("sector", "height"):
            errors.append("layer_length must be 'sector' or 'height'")
        if self.convection_substeps is not None and self.convection_substeps < 1:
            errors.append("convection_substeps must be >= 1")
        if isinstance(self.initial_tank_temp, list):
            object.__setattr__(self, "initial_tank_temp", tuple(self.initial_tank_temp))
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def steps_per_day(self) -> float:
        return 86400.0 / self.time_step

    def convection(self) -> ConvectionSettings:
        return ConvectionSettings(self.correlation, self.layer_length, self.convection_substeps)


@dataclass(frozen=True)
class Config:
    tank: TankSection = field(default_factory=TankSection)
    serpentine: SerpentineSection = field(default_factory=SerpentineSection)
    collector: CollectorSection = field(default_factory=CollectorSection)
    pump: PumpControl = field(default_factory=PumpControl)
    iteration: IterationConfig = field(default_factory=IterationConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    consumption: ConsumptionSchedule = field(default_factory=ConsumptionSchedule)

    def __post_init__(self):
        errors = _section_checks(self.tank, self.collector)
        if errors:
            raise ConfigError(errors)

    def geometry(self) -> TankGeometry:
        return self.tank.geometry()

    def layout(self) -> SerpentineLayout:
        s = self.serpentine
        return build_layout(s.placement, self.geometry(), s.coil_length, s.inner_diameter, s.outer_diameter, s.wall_conductivity)

    def evaluators(self):
        return evaluators(self.simulation.constant_properties)

    def replace(self, **sections) -> "Config":
        """Copy with whole sections or dotted ``section__field`` overrides."""
        updates: dict[str, Any] = {}
        for key, value in sections.items():
            if "__" in key:
                sec, fld = key.split("__", 1)
                current = updates.get(sec, getattr(self, sec))
                updates[sec] = dataclasses.replace(current, **{fld: value})
            else:
                updates[key] = value
        return dataclasses.replace(self, **updates)

    def to_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            section = getattr(self, f.name)
            if isinstance(section, ConsumptionSchedule):
                out[f.name] = section.to_dict()
            else:
                out[f.name] = {k.name: _plain(getattr(section, k.name)) for k in dataclasses.fields(section)}
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "Config":
        if not isinstance(data, dict):
            raise ConfigError(["configuration must be a JSON object"])
        errors: list[str] = []
        known = {f.name: f for f in dataclasses.fields(cls)}
        for key in sorted(set(data) - set(known)):
            errors.append(f"unknown section {key!r}")
        sections = {}
        for name in known:
            raw = data.get(name, {})
            if not isinstance(raw, dict):
                errors.append(f"{name}: must be an object")
                continue
            section_type = _SECTION_TYPES[name]
            try:
                if section_type is ConsumptionSchedule:
                    sections[name] = _schedule(raw, errors)
                else:
                    sections[name] = _build(section_type, name, raw, errors)
            except ValueError as exc:
                errors.append(f"{name}: {exc}")
        errors.extend(_section_checks(sections.get("tank"), sections.get("collector")))
        if errors:
            raise ConfigError(errors)
        return cls(**sections)


def _section_checks(tank: TankSection | None, collector: CollectorSection | None) -> list[str]:
    errors = []
    if tank is not None:
        try:
            geometry = tank.geometry()
        except ValueError as exc:
            errors.extend(f"tank: {e}" for e in str(exc).split("; "))
        else:
            if geometry.sector_count < 3:
                errors.append("tank: the three-coil layout needs at least 3 sectors")
    if collector is not None:
        try:
            collector.params()
        except ValueError as exc:
            errors.extend(f"collector: {e}" for e in str(exc).split("; "))
    return errors


_SECTION_TYPES = {
    "tank": TankSection,
    "serpentine": SerpentineSection,
    "collector": CollectorSection,
    "pump": PumpControl,
    "iteration": IterationConfig,
    "simulation": SimulationConfig,
    "consumption": ConsumptionSchedule,
}

_ENUM_FIELDS = {"mode": PumpMode, "correlation": LayerCorrelation}


def _plain(value):
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, tuple):
        return list(value)
    return value


def _schedule(raw: dict, errors: list[str]) -> ConsumptionSchedule | None:
    try:
        sched = ConsumptionSchedule.from_dict(raw)
    except ValueError as exc:
        errors.append(f"consumption: {exc}")
        return None
    return sched


def _build(section_type, name: str, raw: dict, errors: list[str]):
    fields = {f.name: f for f in dataclasses.fields(section_type)}
    kwargs = {}
    for key in sorted(set(raw) - set(fields)):
        errors.append(f"{name}: unknown key {key!r}")
    for key, value in raw.items():
        if key not in fields:
            continue
        if key in _ENUM_FIELDS and value is not None:
            try:
                value = _ENUM_FIELDS[key](value)
            except ValueError:
                choices = ", ".join(m.value for m in _ENUM_FIELDS[key])
                errors.append(f"{name}.{key}: {value!r} is not one of {choices}")
                continue
        kwargs[key] = value
    try:
        section = section_type(**kwargs)
    except (TypeError, ValueError) as exc:
        errors.append(f"{name}: {exc}")
        return None
    return section


def load_config(path) -> Config:
    """Read a JSON configuration; missing keys take their defaults."""
    text = Path(path).read_text()
    data = json.loads(text) if text.strip() else {}
    return Config.from_dict(data)


def dump_config(config: Config, path) -> None:
    Path(path).write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
