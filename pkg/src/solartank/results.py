"""Run artifacts: per-step CSV, summary JSON and optional SVG plots."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from .engine import PROCESSES, RunResult, StepReport

DAY = 86400.0
KWH = 3.6e6

_SCALAR_COLUMNS = (
    ("timestamp_s", "timestamp", ".3f"),
    ("irradiance_w_m2", "irradiance", ".6f"),
    ("ambient_c", "ambient_temp", ".6f"),
    ("draw_m3", "draw_volume", ".9f"),
    ("pump_on", "pump_on", "d"),
    ("q_solar_useful_w", "q_solar_useful", ".6f"),
    ("q_drawn_w", "q_drawn", ".6f"),
    ("q_lost_w", "q_lost", ".6f"),
    ("q_pipe_w", "q_pipe", ".6f"),
    ("collector_in_c", "collector_in", ".6f"),
    ("collector_out_c", "collector_out", ".6f"),
    ("serpentine_out_c", "serpentine_out", ".6f"),
    ("outer_iterations", "outer_iterations", "d"),
    ("inner_iterations", "inner_iterations", "d"),
    ("energy_residual_j", "energy_residual", ".6e"),
    ("throughput_j", "throughput", ".6e"),
)
TEMP_FORMAT = ".6f"


def csv_columns(sector_count: int) -> list[str]:
    cols = [c[0] for c in _SCALAR_COLUMNS]
    for process in PROCESSES:
        cols.extend(f"{process}_t{i:02d}_c" for i in range(sector_count))
    return cols


def _fmt(value, spec: str) -> str:
    if spec == "d":
        return str(int(value))
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    out = format(value, spec)
    # avoid a signed zero flipping bytes between otherwise equal runs
    return out[1:] if out.startswith("-") and float(out) == 0.0 else out


def report_row(report: StepReport) -> list[str]:
    row = [_fmt(getattr(report, attr), spec) for _, attr, spec in _SCALAR_COLUMNS]
    for process in PROCESSES:
        row.extend(_fmt(float(t), TEMP_FORMAT) for t in report.snapshots[process])
    return row


def write_csv(reports: Sequence[StepReport], path) -> None:
    if not reports:
        raise ValueError("no step reports to write")
    n = len(reports[0].snapshots["convection"])
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(csv_columns(n))
        for r in reports:
            w.writerow(report_row(r))


def read_csv(path) -> dict[str, np.ndarray]:
    """Columns of a results CSV as float arrays, keyed by header name."""
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, j] for j, name in enumerate(header)}


def summarize(result: RunResult) -> dict:
    """Daily and whole-run energy figures plus layering metrics."""
    reports = result.reports
    if not reports:
        raise ValueError("no step reports to summarize")
    dt = result.config.simulation.time_step
    area = result.config.collector.area
    t_first = reports[0].timestamp
    days: dict[int, dict] = {}
    for r in reports:
        d = days.setdefault(int((r.timestamp - t_first) // DAY), _zero_day())
        d["solar_useful_kwh"] += r.q_solar_useful * dt / KWH
        d["delivered_kwh"] += (r.q_solar_useful - r.q_pipe) * dt / KWH
        d["drawn_kwh"] += r.q_drawn * dt / KWH
        d["lost_kwh"] += r.q_lost * dt / KWH
        d["irradiation_kwh_m2"] += r.irradiance * dt / KWH
    daily = []
    for k in sorted(days):
        d = days[k]
        d["day"] = k
        d["collector_efficiency"] = _ratio(d["solar_useful_kwh"], area * d["irradiation_kwh_m2"])
        daily.append(dict(sorted(d.items())))
    temps = result.temps()
    residuals = np.array([r.energy_residual for r in reports])
    throughput = np.array([r.throughput for r in reports])
    rel = np.abs(residuals) / np.where(throughput > 0, throughput, np.inf)
    solar = sum(d["solar_useful_kwh"] for d in daily)
    irr = sum(d["irradiation_kwh_m2"] for d in daily)
    return {
        "steps": len(reports),
        "time_step_s": dt,
        "days": len(reports) * dt / DAY,
        "daily": daily,
        "solar_useful_kwh": solar,
        "delivered_energy_kwh": sum(d["delivered_kwh"] for d in daily),
        "drawn_energy_kwh": sum(d["drawn_kwh"] for d in daily),
        "lost_energy_kwh": sum(d["lost_kwh"] for d in daily),
        "collector_efficiency": _ratio(solar, area * irr),
        "stratification_index_k": float(np.mean(temps[:, -1] - temps[:, 0])),
        "energy_residual_j": float(residuals.sum()),
        "max_relative_residual": float(rel.max()),
        "max_outer_iterations": int(max(r.outer_iterations for r in reports)),
        "max_inner_iterations": int(max(r.inner_iterations for r in reports)),
        "final_temps_c": [float(t) for t in result.final_state.sector_temps],
    }


def _zero_day() -> dict:
    return {k: 0.0 for k in ("solar_useful_kwh", "delivered_kwh", "drawn_kwh", "lost_kwh", "irradiation_kwh_m2")}


def _ratio(a: float, b: float):
    return a / b if b > 0 else None


def write_summary(result: RunResult, path) -> dict:
    summary = summarize(result)
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def write_results(result: RunResult, out_dir, plots: bool = False) -> dict[str, Path]:
    """Write ``steps.csv`` and ``summary.json`` (plus SVGs with ``plots``).

    Returns the written paths keyed by artifact name.
    """
    if not result.reports:
        raise ValueError("no step reports to write")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"csv": out / "steps.csv", "summary": out / "summary.json"}
    write_csv(result.reports, paths["csv"])
    write_summary(result, paths["summary"])
    if plots:
        paths.update(write_plots(result, out))
    return paths


def write_plots(result: RunResult, out_dir) -> dict[str, Path]:
    """Sector temperatures against time and end-of-day profiles, as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(out_dir)
    temps = result.temps()
    hours = (result.times - result.times[0]) / 3600.0
    n = temps.shape[1]
    paths = {}
    with plt.rc_context({"svg.hashsalt": "solartank", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(8, 4))
        for i, label in ((n - 1, "top"), (n // 2, "middle"), (0, "bottom")):
            ax.plot(hours, temps[:, i], label=f"{label} sector")
        ax.plot(hours, result.series("ambient_temp"), color="0.6", lw=0.8, label="ambient")
        ax.set_xlabel("time [h]")
        ax.set_ylabel("temperature [degC]")
        ax.legend(loc="upper left", fontsize="small")
        fig.tight_layout()
        paths["temperatures"] = out / "temperatures.svg"
        fig.savefig(paths["temperatures"], format="svg", metadata={"Date": None})
        plt.close(fig)

        fig, ax = plt.subplots(figsize=(4, 5))
        heights = result.config.geometry().centers
        steps_per_day = int(round(DAY / result.config.simulation.time_step))
        last_day = temps[-min(steps_per_day, len(temps)):]
        for hour in (0, 6, 12, 18):
            k = int(hour * 3600 / result.config.simulation.time_step)
            if k < len(last_day):
                ax.plot(last_day[k], heights, marker="o", ms=3, label=f"{hour:02d}:00")
        ax.set_xlabel("temperature [degC]")
        ax.set_ylabel("height [m]")
        ax.legend(fontsize="small")
        fig.tight_layout()
        paths["profiles"] = out / "profiles.svg"
        fig.savefig(paths["profiles"], format="svg", metadata={"Date": None})
        plt.close(fig)
    return paths
