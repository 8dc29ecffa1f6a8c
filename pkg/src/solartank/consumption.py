"""Daily hot-water draw schedule."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

DAY = 86400.0
HOUR = 3600.0


def _default_profile() -> dict:
    text = resources.files("solartank").joinpath("data/consumption_default.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class ConsumptionSchedule:
    """``daily_volume`` litres per day spread over 24 hourly fractions."""

    daily_volume: float = 250.0  # l/day
    hourly_fractions: tuple[float, ...] = field(
        default_factory=lambda: tuple(_default_profile()["hourly_fractions"])
    )
    net_water_temp: float = 12.0  # degC

    def __post_init__(self):
        errors = self.violations()
        if errors:
            raise ValueError("; ".join(errors))
        object.__setattr__(self, "hourly_fractions", tuple(float(f) for f in self.hourly_fractions))

    def violations(self) -> list[str]:
        errors = []
        fr = self.hourly_fractions
        if len(fr) != 24:
            errors.append(f"hourly_fractions needs 24 values, got {len(fr)}")
        if any(f < 0 for f in fr):
            errors.append("hourly_fractions must be non-negative")
        if fr and abs(math.fsum(fr) - 1.0) > 1e-9:
            errors.append(f"hourly_fractions sum to {math.fsum(fr)!r}, not 1")
        if self.daily_volume < 0:
            errors.append("daily_volume must be >= 0")
        if not 0 <= self.net_water_temp <= 100:
            errors.append("net_water_temp must lie in [0, 100] degC")
        return errors

    @classmethod
    def none(cls, net_water_temp: float = 12.0) -> "ConsumptionSchedule":
        return cls(0.0, net_water_temp=net_water_temp)

    def draw(self, t0: float, t1: float) -> float:
        """Volume drawn between ``t0`` and ``t1`` [m3]; the profile repeats daily."""
        if t1 <= t0 or self.daily_volume == 0:
            return 0.0
        litres = 0.0
        t = t0
        while t < t1:
            hour_start = math.floor(t / HOUR) * HOUR
            seg_end = min(t1, hour_start + HOUR)
            h = int(round(hour_start / HOUR)) % 24
            litres += self.daily_volume * self.hourly_fractions[h] * (seg_end - t) / HOUR
            t = seg_end
        return litres * 1e-3

    def to_dict(self) -> dict:
        return {
            "daily_volume_l": self.daily_volume,
            "net_water_temp": self.net_water_temp,
            "hourly_fractions": list(self.hourly_fractions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConsumptionSchedule":
        allowed = {"daily_volume_l", "net_water_temp", "hourly_fractions", "description"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise ValueError(f"unknown schedule keys: {', '.join(unknown)}")
        base = cls()
        return cls(
            float(data.get("daily_volume_l", base.daily_volume)),
            tuple(data.get("hourly_fractions", base.hourly_fractions)),
            float(data.get("net_water_temp", base.net_water_temp)),
        )


def load_schedule(path) -> ConsumptionSchedule:
    return ConsumptionSchedule.from_dict(json.loads(Path(path).read_text()))
