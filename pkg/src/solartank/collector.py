"""Flat-plate collector and the collector/serpentine loop.

The collector outlet follows the Hottel-Whillier useful-gain form. The
collector inlet is the serpentine outlet, which in turn depends on the
collector outlet, so the charging loop iterates on the collector inlet
temperature. The first update is a Newton step with the loop slope
estimated from the segment effectivenesses, later ones interpolate the
residuals already seen, and every candidate is kept inside the bracket
established so far. The map has a kink where the useful gain reaches
zero; interpolation never mixes points from both sides of it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from .properties import FluidProperties
from .serpentine import ChainResult, ConvergenceError, IterationConfig, SerpentineLayout, chain_pass
from .tank import TankGeometry, TankState

PropsOf = Callable[[float], FluidProperties]


@dataclass(frozen=True)
class CollectorParams:
    area: float = 2.0  # m2
    heat_removal_factor: float = 0.85
    transmittance_absorptance: float = 0.80
    loss_coeff: float = 5.0  # W/(m2 K)

    def __post_init__(self):
        errors = self.violations()
        if errors:
            raise ValueError("; ".join(errors))

    def violations(self) -> list[str]:
        errors = []
        if self.area <= 0:
            errors.append("collector area must be positive")
        if not 0 < self.heat_removal_factor <= 1:
            errors.append("heat_removal_factor must lie in (0, 1]")
        if not 0 < self.transmittance_absorptance <= 1:
            errors.append("transmittance_absorptance must lie in (0, 1]")
        if self.loss_coeff < 0:
            errors.append("collector loss_coeff must be >= 0")
        return errors


# closure below this is round-off in the loop temperatures
_FLOOR = 1e-11


class PumpMode(enum.Enum):
    RADIATION_THRESHOLD = "radiation_threshold"
    DIFFERENTIAL = "differential"


@dataclass(frozen=True)
class PumpControl:
    mode: PumpMode = PumpMode.RADIATION_THRESHOLD
    radiation_threshold: float = 0.0  # W/m2
    on_delta: float = 6.0  # K
    off_delta: float = 2.0  # K

    def __post_init__(self):
        if not isinstance(self.mode, PumpMode):
            object.__setattr__(self, "mode", PumpMode(self.mode))
        if not self.on_delta > self.off_delta >= 0:
            raise ValueError("need on_delta > off_delta >= 0")

    def decide(self, was_on: bool, irradiance: float, stagnation_outlet: float, bottom_temp: float) -> bool:
        """Pump state for the coming step.

        ``stagnation_outlet`` is the collector outlet estimate with the
        bottom-sector water as inlet; only the differential mode uses it.
        """
        if self.mode is PumpMode.RADIATION_THRESHOLD:
            return irradiance > self.radiation_threshold
        delta = stagnation_outlet - bottom_temp
        if was_on:
            return delta > self.off_delta
        return delta > self.on_delta


def useful_gain(inlet_temp: float, irradiance: float, ambient_temp: float, params: CollectorParams) -> float:
    """Useful collector gain [W], never negative."""
    q = params.area * params.heat_removal_factor * (
        irradiance * params.transmittance_absorptance - params.loss_coeff * (inlet_temp - ambient_temp)
    )
    return max(q, 0.0)


def collector_outlet(
    inlet_temp: float,
    irradiance: float,
    ambient_temp: float,
    params: CollectorParams,
    flow_rate: float,
    cp_fluid: float,
) -> float:
    if flow_rate <= 0:
        raise ValueError("flow_rate must be positive")
    return inlet_temp + useful_gain(inlet_temp, irradiance, ambient_temp, params) / (flow_rate * cp_fluid)


def zero_gain_inlet(irradiance: float, ambient_temp: float, params: CollectorParams) -> float:
    """Inlet temperature at which the useful gain falls to zero [degC]."""
    if params.loss_coeff == 0:
        return math.inf
    return ambient_temp + irradiance * params.transmittance_absorptance / params.loss_coeff


def pipe_leg(temp: float, ambient_temp: float, pipe_loss: float, flow_rate: float, cp_fluid: float) -> float:
    """Fluid temperature after a pipe leg with lumped conductance ``pipe_loss`` [W/K]."""
    return temp - pipe_loss * (temp - ambient_temp) / (flow_rate * cp_fluid)


@dataclass(frozen=True)
class LoopResult:
    state: TankState
    collector_in: float
    collector_out: float
    serpentine_in: float
    serpentine_out: float
    q_useful: float  # W
    q_pipe: float  # W, both legs
    outer_iterations: int
    chain: ChainResult
    history: tuple[float, ...] = field(default=())

    @property
    def closure_error(self) -> float:
        """Mismatch between returned fluid and assumed collector inlet [K]."""
        return self.serpentine_out - self.collector_in


def charge_loop(
    state: TankState,
    layout: SerpentineLayout,
    params: CollectorParams,
    irradiance: float,
    ambient_temp: float,
    flow_rate: float,
    dt: float,
    cfg: IterationConfig,
    geometry: TankGeometry,
    water: PropsOf,
    fluid: PropsOf | None = None,
    pipe_loss: float = 0.0,
) -> LoopResult:
    """Converge the collector/serpentine loop for one step and commit it.

    Starts from a collector inlet a little above the water in the lowest
    open coil sector, where the fluid leaves the coil,
    runs collector -> supply pipe -> serpentine chain -> return pipe, and
    updates the inlet guess until successive candidates agree within
    ``cfg.outer_tolerance``.
    """
    fluid = fluid or water

    def evaluate(x: float):
        cp = fluid(min(max(x, 0.0), 100.0)).specific_heat
        t_col_out = collector_outlet(x, irradiance, ambient_temp, params, flow_rate, cp)
        t_serp_in = pipe_leg(t_col_out, ambient_temp, pipe_loss, flow_rate, cp)
        chain = chain_pass(t_serp_in, layout, state, flow_rate, dt, cfg, geometry, water, fluid)
        t_return = pipe_leg(chain.outlet_temp, ambient_temp, pipe_loss, flow_rate, cp)
        return t_return, (cp, t_col_out, t_serp_in, chain)

    def collector_slope(cp: float) -> float:
        # d(collector outlet)/d(inlet) while the useful gain is positive
        return 1.0 - params.area * params.heat_removal_factor * params.loss_coeff / (flow_rate * cp)

    def slope(x: float, cp: float, chain: ChainResult) -> float:
        # d(return)/d(inlet): collector, pipes and every segment in series
        w = flow_rate * cp
        s = 1.0 if useful_gain(x, irradiance, ambient_temp, params) == 0 else collector_slope(cp)
        s *= (1.0 - pipe_loss / w) ** 2
        for seg, res in zip(layout.active_segments, chain.segments):
            s *= 1.0 - _segment_gain(res, w, dt, geometry.sector_volume, water(state.sector_temps[seg.sector_index]))
        return s

    # above this inlet the collector gives nothing: the loop map kinks there
    kink = zero_gain_inlet(irradiance, ambient_temp, params)
    coldest = min(state.sector_temps[s.sector_index] for s in layout.active_segments)
    if pipe_loss == 0 and kink <= coldest:
        # the coil return never drops below the coldest coil sector, so no
        # reachable inlet collects heat; circulating would only shuffle heat
        # between coil sectors
        return LoopResult(state, math.nan, math.nan, math.nan, math.nan, 0.0, 0.0, 0, ChainResult(state, math.nan), ())

    # the fluid comes back from the lowest open coil sector
    x = state.sector_temps[layout.active_segments[-1].sector_index] + cfg.initial_outlet_offset
    history = [x]
    points: list[tuple[float, float]] = []
    # the return temperature rises with the inlet but by less, so the sign
    # of the residual tells on which side of x the fixed point lies
    lo, hi = -math.inf, math.inf
    for k in range(1, cfg.outer_max_iterations + 1):
        g, parts = evaluate(x)
        r = g - x
        cp, t_col_out, t_serp_in, chain = parts
        exchanged = sum(abs(seg.heat_flux) for seg in chain.segments) / (flow_rate * cp)
        tol = max(min(cfg.outer_tolerance, cfg.outer_relative_tolerance * exchanged), _FLOOR)
        if abs(r) < tol:
            q_useful = flow_rate * cp * (t_col_out - x)
            q_pipe = flow_rate * cp * ((t_col_out - t_serp_in) + (chain.outlet_temp - g))
            return LoopResult(
                chain.state, x, t_col_out, t_serp_in, chain.outlet_temp,
                q_useful, q_pipe, k, chain, tuple(history),
            )
        if r > 0:
            lo = max(lo, x)
        else:
            hi = min(hi, x)
        points.append((x, r))
        # interpolate only across points on the fixed point's side of the kink
        if lo >= kink:
            usable = [p for p in points if p[0] >= kink]
        elif hi <= kink:
            usable = [p for p in points if p[0] <= kink]
        else:
            usable = [p for p in points if (p[0] >= kink) == (x >= kink)]
        if len(usable) == 1:
            s_first = slope(x, cp, chain)
            x_next = _kinked_newton(x, r, s_first, kink, 1.0 - collector_slope(cp))
        elif len(usable) == 2 and usable[0] is points[0]:
            # the slope at the starting point is still exact enough to curve the secant
            x_next = _quadratic_step(usable[0], (x, r), 1.0 - s_first)
        else:
            x_next = _next_inlet(usable[-3:])
        if not (math.isfinite(x_next) and lo < x_next < hi):
            x_next = g if lo < g < hi else 0.5 * (lo + hi)
        x = x_next
        history.append(x)
    raise ConvergenceError(
        f"collector loop did not converge in {cfg.outer_max_iterations} passes",
        iterates=tuple(history),
    )


def _segment_gain(res, w: float, dt: float, volume: float, props: FluidProperties) -> float:
    """d(heat flux)/d(inlet) / (m_dot c_p) of one converged segment.

    The recorded effectiveness already contains the sector warming during
    the step; the second term adds the growth of K with the temperature
    difference.
    """
    eff = res.effectiveness
    if eff <= 0:
        return max(eff, 0.0)
    b = w * dt / (2.0 * props.density * props.specific_heat * volume)
    eps = min(eff / (1.0 - b * eff), 1.0 - 1e-12)
    ntu = -math.log1p(-eps)
    return eff + res.k_exponent * ntu * (1.0 - eps) / (1.0 + b * eps) ** 2


def _kinked_newton(x: float, r: float, s: float, kink: float, drop: float) -> float:
    """Newton step on the residual with the collector slope switching at ``kink``.

    ``s`` is the loop slope at ``x``; past the kink (upward) the collector
    factor ``1 - drop`` disappears from it, below it (downward) it appears.
    """
    step = x + r / (1.0 - s)
    if x < kink < step:
        s_other = s / (1.0 - drop) if drop < 1 else s
    elif step < kink <= x:
        s_other = s * (1.0 - drop)
    else:
        return step
    r_kink = r - (1.0 - s) * (kink - x)
    return kink + r_kink / (1.0 - s_other)


def _quadratic_step(p0: tuple[float, float], p1: tuple[float, float], d0: float) -> float:
    """Root of the parabola through ``p0`` and ``p1`` with residual slope ``-d0`` at ``p0``.

    Takes the root nearer ``p1``; falls back to the secant when the
    parabola has no real root or no curvature.
    """
    (x0, r0), (x1, r1) = p0, p1
    h = x1 - x0
    c = (r1 - r0 + d0 * h) / (h * h)
    # r(x) = r0 - d0 u + c u^2 with u = x - x0
    disc = d0 * d0 - 4.0 * c * r0
    if abs(c) * h * h < 1e-12 * (abs(r0) + abs(r1)) or disc < 0:
        return _next_inlet([p0, p1])
    root = math.sqrt(disc)
    u = [(d0 - root) / (2.0 * c), (d0 + root) / (2.0 * c)]
    return x0 + min(u, key=lambda v: abs(v - h))


def _next_inlet(points: list[tuple[float, float]]) -> float:
    """Secant (two points) or inverse quadratic interpolation (three)."""
    if len(points) == 3:
        (x0, r0), (x1, r1), (x2, r2) = points
        if r0 != r1 and r1 != r2 and r0 != r2:
            return (
                x0 * r1 * r2 / ((r0 - r1) * (r0 - r2))
                + x1 * r0 * r2 / ((r1 - r0) * (r1 - r2))
                + x2 * r0 * r1 / ((r2 - r0) * (r2 - r1))
            )
        points = points[1:]
    (x0, r0), (x1, r1) = points[-2:]
    if r0 == r1:
        return math.nan
    return x1 - r1 * (x1 - x0) / (r1 - r0)
