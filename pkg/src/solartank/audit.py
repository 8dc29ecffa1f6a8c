"""Invariant and energy-audit checks for a configuration.

Each check returns a :class:`CheckResult`; :func:`run_checks` gathers them
for the ``check`` command. The energy audit runs the configuration in
constant-property mode on synthetic clear-sky weather.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .config import Config
from .engine import RunResult, Simulator
from .scenarios import autumn_weather, run_days
from .serpentine import IterationConfig, SerpentineSegment, segment_exchange
from .tank import (
    ConvectionSettings,
    TankGeometry,
    TankState,
    conduction_step,
    convection_step,
    discharge_step,
    heat_capacities,
)

STEP_RESIDUAL_LIMIT = 1e-6
GLOBAL_RESIDUAL_LIMIT = 1e-5


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def energy_ledger(result: RunResult) -> tuple[float, float]:
    """Global ledger mismatch [J] and the gross energy flow it is judged against [J].

    mismatch = E_final - E_initial - sum((Q_u - Q_drawn - Q_lost - Q_pipe) dt)
    """
    sim = Simulator(result.config)
    dt = result.config.simulation.time_step
    e0 = sim._enthalpy(result.initial_state.sector_temps)
    e1 = sim._enthalpy(result.final_state.sector_temps)
    net = gross = 0.0
    for r in result.reports:
        net += (r.q_solar_useful - r.q_drawn - r.q_lost - r.q_pipe) * dt
        gross += (abs(r.q_solar_useful) + abs(r.q_drawn) + abs(r.q_lost) + abs(r.q_pipe)) * dt
    return e1 - e0 - net, gross


def audit_run(config: Config) -> tuple[RunResult, float]:
    """Constant-property run of ``config`` without warmup; returns (result, seconds)."""
    cfg = config.replace(simulation__constant_properties=True, simulation__warmup_days=0)
    t0 = time.perf_counter()
    result = Simulator(cfg).run(autumn_weather(run_days(cfg)))
    return result, time.perf_counter() - t0


def check_energy(result: RunResult) -> list[CheckResult]:
    per_step = max(abs(r.energy_residual) / r.throughput for r in result.reports if r.throughput > 0)
    mismatch, gross = energy_ledger(result)
    rel = abs(mismatch) / gross if gross > 0 else 0.0
    return [
        CheckResult("per-step energy residual", per_step < STEP_RESIDUAL_LIMIT,
                    f"max |residual|/throughput = {per_step:.2e} (limit {STEP_RESIDUAL_LIMIT:g})"),
        CheckResult("global energy ledger", rel < GLOBAL_RESIDUAL_LIMIT,
                    f"|mismatch|/gross flow = {rel:.2e} (limit {GLOBAL_RESIDUAL_LIMIT:g})"),
    ]


def check_iterations(result: RunResult) -> CheckResult:
    day = [r for r in result.reports if r.pump_on]
    outer = max((r.outer_iterations for r in day), default=0)
    inner = max((r.inner_iterations for r in day), default=0)
    return CheckResult("loop iterations", outer <= 5 and inner <= 10,
                       f"max outer passes {outer} (limit 5), max segment iterations {inner} (limit 10)")


def check_conduction(geometry: TankGeometry, water) -> CheckResult:
    n = geometry.sector_count
    z = geometry.centers
    temps = 40.0 + 10.0 * np.cos(np.pi * z / geometry.height)
    state = TankState(temps)
    dt, steps = 60.0, 1440
    for _ in range(steps):
        state = conduction_step(state, dt, geometry, water)
    a = water(40.0).diffusivity
    expected = math.exp(-a * (math.pi / geometry.height) ** 2 * dt * steps)
    got = (state.sector_temps - 40.0) @ np.cos(np.pi * z / geometry.height) / (10.0 * n / 2)
    conserved = abs(state.sector_temps.sum() - temps.sum()) < 1e-9 * temps.sum()
    err = abs(got / expected - 1)
    return CheckResult("conduction mode decay", err < 0.01 and conserved,
                       f"amplitude ratio error {err:.2e}, sum conserved {conserved}")


def check_discharge(geometry: TankGeometry, rng: np.random.Generator) -> CheckResult:
    worst = 0.0
    for _ in range(50):
        temps = rng.uniform(10, 80, geometry.sector_count)
        t_net = float(rng.uniform(5, 20))
        shifted = discharge_step(TankState(temps), geometry.sector_volume, t_net, geometry).sector_temps
        worst = max(worst, float(np.max(np.abs(shifted - np.r_[t_net, temps[:-1]]))))
    return CheckResult("discharge plug shift", worst == 0.0, f"max deviation from a one-sector shift {worst:.1e} K")


def check_exchanger(config: Config, water) -> CheckResult:
    s = config.serpentine
    seg = SerpentineSegment(0, 1.0, s.inner_diameter, s.outer_diameter, s.wall_conductivity)
    flow = config.simulation.flow_rate
    cp = water(40.0).specific_heat
    cfg = IterationConfig(tolerance=1e-10)
    worst = 0.0
    for ntu in (0.1, 1.0, 5.0):
        k = ntu * flow * cp / seg.exchange_area
        res = segment_exchange(60.0, 20.0, seg, flow, 600.0, 1e9, cfg, water, k_override=k)
        expected = 20.0 + 40.0 * math.exp(-ntu)
        worst = max(worst, abs((res.outlet_temp - 20.0) / (expected - 20.0) - 1))
    return CheckResult("exchanger closed form", worst < 0.02, f"max outlet-excess error {worst:.2e} over NTU 0.1, 1, 5")


def check_convection(geometry: TankGeometry, settings: ConvectionSettings, water, rng) -> CheckResult:
    ok = True
    for _ in range(20):
        temps = rng.uniform(15, 70, geometry.sector_count)
        out, _ = convection_step(TankState(temps), 600.0, geometry, settings, water)
        t = out.sector_temps
        caps0 = heat_capacities(temps, geometry.sector_volumes, water)
        ok &= t.min() >= temps.min() - 1e-9 and t.max() <= temps.max() + 1e-9
        ok &= abs(caps0 @ t - caps0 @ temps) <= 1e-9 * abs(caps0 @ temps)
    stable = np.linspace(20, 60, geometry.sector_count)
    out, moved = convection_step(TankState(stable), 600.0, geometry, settings, water)
    ok &= moved == 0.0 and np.array_equal(out.sector_temps, stable)
    return CheckResult("convection bounds", bool(ok), "stays within input range, conserves energy, leaves stable profiles alone")


def run_checks(config: Config, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    geometry = config.geometry()
    water, _ = config.evaluators()
    result, seconds = audit_run(config)
    checks = check_energy(result)
    checks.append(CheckResult("audit runtime", seconds < 5.0, f"{len(result)} steps in {seconds:.2f} s"))
    checks.append(check_iterations(result))
    checks.append(check_conduction(geometry, water))
    checks.append(check_discharge(geometry, rng))
    checks.append(check_exchanger(config, water))
    checks.append(check_convection(geometry, config.simulation.convection(), water, rng))
    return checks
