"""Parameter sweeps over coil placement, flow rate and layer correlation."""

from __future__ import annotations

import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .config import Config, ConfigError
from .consumption import ConsumptionSchedule
from .correlations import LayerCorrelation
from .engine import Simulator
from .results import summarize
from .serpentine import PLACEMENTS
from .weather import WeatherSeries

AXES = ("placement", "flow", "correlation")


@dataclass(frozen=True)
class Variant:
    placement: str
    flow_rate: float
    correlation: LayerCorrelation

    @property
    def key(self) -> tuple:
        return (self.placement, self.flow_rate, self.correlation.value)

    def apply(self, base: Config) -> Config:
        return base.replace(
            serpentine__placement=self.placement,
            simulation__flow_rate=self.flow_rate,
            simulation__correlation=self.correlation,
        )


@dataclass(frozen=True)
class SweepRow:
    variant: Variant
    ok: bool
    delivered_energy_kwh: float | None = None
    collector_efficiency: float | None = None
    stratification_index_k: float | None = None
    error: str = ""

    def as_dict(self) -> dict:
        return {
            "placement": self.variant.placement,
            "flow_rate": self.variant.flow_rate,
            "correlation": self.variant.correlation.value,
            "status": "ok" if self.ok else "failed",
            "delivered_energy_kwh": self.delivered_energy_kwh,
            "collector_efficiency": self.collector_efficiency,
            "stratification_index_k": self.stratification_index_k,
            "error": self.error,
        }


def parse_axis(text: str) -> tuple[str, list]:
    """``"placement=bottom,top"`` -> ``("placement", ["bottom", "top"])``."""
    name, sep, values = text.partition("=")
    name = name.strip()
    if not sep or name not in AXES:
        raise ConfigError([f"axis must look like NAME=v1,v2 with NAME in {', '.join(AXES)}; got {text!r}"])
    items = [v.strip() for v in values.split(",") if v.strip()]
    return name, items


def build_variants(base: Config, axes: dict[str, Sequence]) -> list[Variant]:
    """Cartesian product of the given axes; missing axes keep the base value.

    An axis that is present but empty is an error.
    """
    errors = []
    for name in sorted(set(axes) - set(AXES)):
        errors.append(f"unknown sweep axis {name!r}")
    for name, values in axes.items():
        if name in AXES and len(values) == 0:
            errors.append(f"sweep axis {name!r} is empty")
    placements = list(axes.get("placement", [base.serpentine.placement]))
    for p in placements:
        if p not in PLACEMENTS:
            errors.append(f"placement {p!r} is not one of {', '.join(PLACEMENTS)}")
    flows = []
    for f in axes.get("flow", [base.simulation.flow_rate]):
        try:
            f = float(f)
        except (TypeError, ValueError):
            errors.append(f"flow rate {f!r} is not a number")
            continue
        if not f > 0:
            errors.append(f"flow rate {f!r} must be positive")
        flows.append(f)
    correlations = []
    for c in axes.get("correlation", [base.simulation.correlation]):
        try:
            correlations.append(LayerCorrelation(c))
        except ValueError:
            errors.append(f"correlation {c!r} is not one of {', '.join(m.value for m in LayerCorrelation)}")
    if errors:
        raise ConfigError(errors)
    return [Variant(p, f, c) for p, f, c in itertools.product(placements, flows, correlations)]


def run_variant(base: Config, variant: Variant, weather: WeatherSeries, schedule: ConsumptionSchedule | None) -> SweepRow:
    try:
        result = Simulator(variant.apply(base)).run(weather, schedule)
        summary = summarize(result)
    except Exception as exc:  # a failed variant is reported, not raised
        return SweepRow(variant, False, error=f"{type(exc).__name__}: {exc}")
    return SweepRow(
        variant,
        True,
        summary["delivered_energy_kwh"],
        summary["collector_efficiency"],
        summary["stratification_index_k"],
    )


def sweep(
    base: Config,
    axes: dict[str, Sequence],
    weather: WeatherSeries,
    schedule: ConsumptionSchedule | None = None,
    workers: int | None = 1,
) -> list[SweepRow]:
    """One summary row per variant, sorted by variant key.

    ``workers > 1`` runs variants in separate processes; ``None`` lets the
    executor pick. The output does not depend on the worker count.
    """
    variants = build_variants(base, axes)
    if workers == 1 or len(variants) == 1:
        rows = [run_variant(base, v, weather, schedule) for v in variants]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_variant, base, v, weather, schedule) for v in variants]
            rows = [f.result() for f in futures]
    return sorted(rows, key=lambda r: r.variant.key)


SUMMARY_COLUMNS = (
    "placement", "flow_rate", "correlation", "status",
    "delivered_energy_kwh", "collector_efficiency", "stratification_index_k", "error",
)


def write_sweep(rows: Sequence[SweepRow], path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for row in rows:
            d = row.as_dict()
            w.writerow(["" if d[c] is None else (f"{d[c]:.6f}" if isinstance(d[c], float) else d[c]) for c in SUMMARY_COLUMNS])


def format_table(rows: Sequence[SweepRow]) -> str:
    lines = [f"{'placement':<11} {'flow':>7} {'correlation':<18} {'delivered kWh':>13} {'efficiency':>10} {'strat K':>8}"]
    for r in rows:
        v = r.variant
        if r.ok:
            eff = "-" if r.collector_efficiency is None else f"{r.collector_efficiency:.4f}"
            lines.append(
                f"{v.placement:<11} {v.flow_rate:>7.4f} {v.correlation.value:<18} "
                f"{r.delivered_energy_kwh:>13.3f} {eff:>10} {r.stratification_index_k:>8.3f}"
            )
        else:
            lines.append(f"{v.placement:<11} {v.flow_rate:>7.4f} {v.correlation.value:<18} FAILED {r.error}")
    return "\n".join(lines)
