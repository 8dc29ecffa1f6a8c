"""Operator-splitting time stepper.

Every step applies, in this order: discharge (hot water drawn at the top,
mains water in at the bottom), charging through the serpentine when the
pump runs, axial conduction, ambient losses and layer free convection.
Each sub-process sees the state left by the previous one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .collector import charge_loop, collector_outlet
from .config import Config
from .properties import T_MAX, T_MIN, PropertyRangeError
from .consumption import ConsumptionSchedule
from .tank import (
    LossModel,
    TankState,
    conduction_step,
    convection_step,
    discharge_step,
    heat_capacities,
    loss_step,
)
from .weather import DAY, WeatherError, WeatherRecord, WeatherSeries

PROCESSES = ("discharge", "charge", "conduction", "loss", "convection")


class SimulationError(RuntimeError):
    """A sub-process failed; ``process`` names which one."""

    def __init__(self, process: str, timestamp: float, cause: Exception):
        super().__init__(f"{process} failed at t={timestamp:g} s: {cause}")
        self.process = process
        self.timestamp = timestamp
        self.__cause__ = cause


@dataclass(frozen=True)
class StepReport:
    timestamp: float  # start of the step [s]
    snapshots: dict  # process name -> sector temperatures after it
    irradiance: float
    ambient_temp: float
    draw_volume: float  # m3
    pump_on: bool
    q_solar_useful: float  # W
    q_drawn: float  # W, enthalpy leaving with hot water minus mains enthalpy in
    q_lost: float  # W
    q_pipe: float  # W
    collector_in: float  # NaN when the pump is off
    collector_out: float
    serpentine_out: float
    outer_iterations: int
    inner_iterations: int
    energy_residual: float  # J
    throughput: float  # J, summed |sector enthalpy change| over sub-processes

    @property
    def final_temps(self) -> np.ndarray:
        return self.snapshots["convection"]


class Simulator:
    """Prepared model for one configuration."""

    def __init__(self, config: Config):
        self.config = config
        self.geometry = config.geometry()
        self.layout = config.layout()
        self.layout.validate_for(self.geometry)
        self.water, self.fluid = config.evaluators()
        self.params = config.collector.params()
        self.convection = config.simulation.convection()
        self.dt = config.simulation.time_step
        self.volumes = self.geometry.sector_volumes

    def initial_state(self, net_water_temp: float | None = None) -> TankState:
        init = self.config.simulation.initial_tank_temp
        if init is None:
            t = self.config.consumption.net_water_temp if net_water_temp is None else net_water_temp
            return TankState.uniform(self.geometry, t)
        if isinstance(init, (int, float)):
            return TankState.uniform(self.geometry, init)
        if len(init) != self.geometry.sector_count:
            raise ValueError("initial_tank_temp profile needs one value per sector")
        return TankState(np.array(init, dtype=float))

    @staticmethod
    def _check_range(process: str, t: float, temps: np.ndarray) -> None:
        lo, hi = float(temps.min()), float(temps.max())
        if lo < T_MIN or hi > T_MAX:
            bad = hi if hi > T_MAX else lo
            raise SimulationError(process, t, PropertyRangeError(bad))

    def _enthalpy(self, temps: np.ndarray) -> float:
        return float(np.dot(heat_capacities(temps, self.volumes, self.water), temps))

    def _moved(self, before: np.ndarray, after: np.ndarray) -> float:
        caps = heat_capacities(before, self.volumes, self.water)
        return float(np.sum(caps * np.abs(after - before)))

    def step(
        self,
        state: TankState,
        weather: WeatherRecord,
        draw: float,
        schedule: ConsumptionSchedule,
        pump_was_on: bool = False,
    ) -> tuple[TankState, StepReport]:
        dt = self.dt
        t = state.timestamp
        e0 = self._enthalpy(state.sector_temps)
        snapshots = {}
        throughput = 0.0

        # discharge, split into sub-draws no larger than a sector
        t_net = schedule.net_water_temp
        q_drawn = 0.0
        s = state
        try:
            if draw > 0:
                n_sub = max(1, math.ceil(draw / self.geometry.sector_volume - 1e-12))
                dv = draw / n_sub
                p_net = self.water(t_net)
                for _ in range(n_sub):
                    p_top = self.water(s.top)
                    q_drawn += dv * (p_top.density * p_top.specific_heat * s.top - p_net.density * p_net.specific_heat * t_net)
                    s = discharge_step(s, dv, t_net, self.geometry)
                q_drawn /= dt
        except Exception as exc:
            raise SimulationError("discharge", t, exc) from exc
        self._check_range("discharge", t, s.sector_temps)
        throughput += self._moved(state.sector_temps, s.sector_temps)
        snapshots["discharge"] = s.sector_temps

        # charge
        ambient = weather.ambient_temp
        cp_f = self.fluid(min(max(s.bottom, 0.0), 100.0)).specific_heat
        stagnation = collector_outlet(s.bottom, weather.irradiance, ambient, self.params, self.config.simulation.flow_rate, cp_f)
        pump_on = self.layout.has_active and self.config.pump.decide(pump_was_on, weather.irradiance, stagnation, s.bottom)
        q_useful = q_pipe = 0.0
        col_in = col_out = serp_out = math.nan
        outer = inner = 0
        if pump_on:
            before = s.sector_temps
            try:
                loop = charge_loop(
                    s, self.layout, self.params, weather.irradiance, ambient,
                    self.config.simulation.flow_rate, dt, self.config.iteration,
                    self.geometry, self.water, self.fluid, self.config.collector.pipe_loss,
                )
            except Exception as exc:
                raise SimulationError("charge", t, exc) from exc
            s = loop.state
            self._check_range("charge", t, s.sector_temps)
            q_useful, q_pipe = loop.q_useful, loop.q_pipe
            col_in, col_out, serp_out = loop.collector_in, loop.collector_out, loop.serpentine_out
            outer, inner = loop.outer_iterations, loop.chain.max_iterations
            throughput += self._moved(before, s.sector_temps)
        snapshots["charge"] = s.sector_temps

        try:
            before = s.sector_temps
            s = conduction_step(s, dt, self.geometry, self.water)
            self._check_range("conduction", t, s.sector_temps)
            throughput += self._moved(before, s.sector_temps)
            snapshots["conduction"] = s.sector_temps

            before = s.sector_temps
            tank_ambient = self.config.tank.ambient_temp
            loss = LossModel(self.geometry.insulation_loss_coeff, ambient if tank_ambient is None else tank_ambient)
            s, q_lost = loss_step(s, dt, loss, self.geometry, self.water)
            self._check_range("loss", t, s.sector_temps)
            throughput += self._moved(before, s.sector_temps)
            snapshots["loss"] = s.sector_temps

            before = s.sector_temps
            s, _ = convection_step(s, dt, self.geometry, self.convection, self.water)
            self._check_range("convection", t, s.sector_temps)
            throughput += self._moved(before, s.sector_temps)
            snapshots["convection"] = s.sector_temps
        except SimulationError:
            raise
        except Exception as exc:
            process = PROCESSES[len(snapshots)]
            raise SimulationError(process, t, exc) from exc

        s = TankState(s.sector_temps, t + dt)
        e1 = self._enthalpy(s.sector_temps)
        residual = e1 - e0 - (q_useful - q_drawn - q_lost - q_pipe) * dt
        report = StepReport(
            timestamp=t,
            snapshots=snapshots,
            irradiance=weather.irradiance,
            ambient_temp=ambient,
            draw_volume=draw,
            pump_on=pump_on,
            q_solar_useful=q_useful,
            q_drawn=q_drawn,
            q_lost=q_lost,
            q_pipe=q_pipe,
            collector_in=col_in,
            collector_out=col_out,
            serpentine_out=serp_out,
            outer_iterations=outer,
            inner_iterations=inner,
            energy_residual=residual,
            throughput=throughput,
        )
        return s, report

    def run(
        self,
        weather: WeatherSeries,
        schedule: ConsumptionSchedule | None = None,
        initial: TankState | None = None,
        include_warmup: bool = False,
    ) -> "RunResult":
        """Step through warmup plus the reported days.

        The consumption schedule repeats every day. Weather must cover the
        whole span; each record is held until the next, so a cadence
        coarser than the time step repeats values.
        """
        sim = self.config.simulation
        schedule = schedule or self.config.consumption
        total = (sim.warmup_days + sim.duration_days) * DAY
        n_steps = int(round(total / self.dt))
        if not weather.covers(0.0, n_steps * self.dt):
            raise WeatherError(
                f"weather covers [{weather.start:g}, {weather.end:g}] s but the run needs [0, {n_steps * self.dt:g}] s"
            )
        state = initial if initial is not None else self.initial_state(schedule.net_water_temp)
        state = TankState(state.sector_temps, 0.0)
        warmup_end = sim.warmup_days * DAY
        reports = []
        initial_reported = state if warmup_end == 0 else None
        pump_on = False
        for k in range(n_steps):
            t = k * self.dt
            if initial_reported is None and t >= warmup_end - 1e-9:
                initial_reported = state
            rec = weather.at(t)
            draw = schedule.draw(t, t + self.dt)
            state, report = self.step(state, rec, draw, schedule, pump_on)
            pump_on = report.pump_on
            if include_warmup or t >= warmup_end - 1e-9:
                reports.append(report)
        return RunResult(self.config, tuple(reports), initial_reported, state)


@dataclass(frozen=True)
class RunResult:
    config: Config
    reports: tuple[StepReport, ...]
    initial_state: TankState  # state at the start of the reported window
    final_state: TankState

    def __len__(self):
        return len(self.reports)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.timestamp for r in self.reports])

    def temps(self, process: str = "convection") -> np.ndarray:
        """(steps, sectors) temperatures after ``process`` in each step."""
        return np.array([r.snapshots[process] for r in self.reports])

    def series(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.reports], dtype=float)


def run(config: Config, weather: WeatherSeries, schedule: ConsumptionSchedule | None = None,
        initial: TankState | None = None) -> RunResult:
    return Simulator(config).run(weather, schedule, initial)
