"""Immersed serpentine heat exchanger, one segment per tank sector.

The working fluid enters the topmost active segment and flows downward;
each segment's outlet is the next segment's inlet. Inside a segment the
film coefficients depend on the unknown outlet and wall temperatures, so
they are found by fixed-point iteration:

1. guess the outlet from an assumed exchange effectiveness,
2. take the mean fluid temperature and a wall temperature slightly
   closer to the water,
3. build the inner (forced) and outer (free) film coefficients and the
   overall conductance K,
4. compute the heat flow, the end-of-step sector temperature and the
   outlet temperature from the same heat flow,
5. drive the next pass with the step-averaged sector temperature and
   repeat until outlet and sector temperatures stop moving.

The outlet is ``T_in - q / (m_dot c_p)`` so that what the fluid releases is
exactly what the sector absorbs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import correlations as corr
from .properties import FluidProperties, T_MAX, T_MIN
from .tank import TankGeometry, TankState

PropsOf = Callable[[float], FluidProperties]


class ConvergenceError(RuntimeError):
    """An iteration ran out of passes. ``iterates`` holds the last two."""

    def __init__(self, message: str, iterates=(), segment_index: int | None = None):
        super().__init__(message)
        self.iterates = tuple(iterates)
        self.segment_index = segment_index


@dataclass(frozen=True)
class SerpentineSegment:
    sector_index: int
    length: float  # m
    inner_diameter: float = 0.010  # m
    outer_diameter: float = 0.012  # m
    wall_conductivity: float = 380.0  # W/(m K), copper

    def __post_init__(self):
        if not self.outer_diameter > self.inner_diameter > 0:
            raise ValueError("need outer_diameter > inner_diameter > 0")
        if self.length < 0:
            raise ValueError("segment length must be >= 0")
        if self.wall_conductivity <= 0:
            raise ValueError("wall_conductivity must be positive")

    @property
    def wall_thickness(self) -> float:
        return 0.5 * (self.outer_diameter - self.inner_diameter)

    @property
    def exchange_area(self) -> float:
        return math.pi * self.outer_diameter * self.length


@dataclass(frozen=True)
class SerpentineLayout:
    """Segments in flow order (top sector first) with on/off valves."""

    segments: tuple[SerpentineSegment, ...]
    active_flags: tuple[bool, ...] | None = None

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        flags = tuple(self.active_flags) if self.active_flags is not None else (True,) * len(segs)
        object.__setattr__(self, "active_flags", flags)
        if len(flags) != len(segs):
            raise ValueError("one active flag per segment")
        idx = [s.sector_index for s in segs]
        if any(b >= a for a, b in zip(idx, idx[1:])):
            raise ValueError("segment sector indices must strictly decrease along the flow")

    @property
    def active_segments(self) -> list[SerpentineSegment]:
        return [s for s, on in zip(self.segments, self.active_flags) if on]

    @property
    def has_active(self) -> bool:
        return any(self.active_flags)

    def validate_for(self, geometry: TankGeometry) -> None:
        for s in self.segments:
            if not 0 <= s.sector_index < geometry.sector_count:
                raise ValueError(f"segment sector {s.sector_index} outside the tank")


@dataclass(frozen=True)
class IterationConfig:
    """Inner (segment) and outer (collector loop) iteration settings.

    ``wall_temp_blend`` is the fraction of the fluid-to-water difference by
    which the wall estimate sits below the mean fluid temperature.
    ``outer_tolerance`` is kept much tighter than ``tolerance`` because
    any loop-closure mismatch shows up directly in the energy ledger. When
    the coils exchange little heat (weak sun at dawn) the loop must also
    close to ``outer_relative_tolerance`` times the summed segment
    temperature changes of the fluid.

    Once a segment meets ``tolerance`` its iteration keeps going until the
    change drops below ``refine_tolerance``. Stopping at a coarse tolerance
    makes the segment outlet jump by up to ~1e-3 K as the pass count
    changes with the inlet, and the outer loop cannot settle on a jumpy
    map. ``iterations_used`` still counts the passes to ``tolerance``;
    ``refine_tolerance=None`` switches the tail off.
    """

    initial_effectiveness: float = 0.6
    wall_temp_blend: float = 0.2
    tolerance: float = 0.01  # K
    max_iterations: int = 50
    outer_tolerance: float = 1e-4  # K
    outer_max_iterations: int = 30
    initial_outlet_offset: float = 1.5  # K above the lowest open coil sector
    refine_tolerance: float | None = 1e-7  # K
    outer_relative_tolerance: float = 3e-7  # of the fluid temperature change in the coils

    def __post_init__(self):
        if not 0 < self.initial_effectiveness <= 1:
            raise ValueError("initial_effectiveness must lie in (0, 1]")
        if not 0 <= self.wall_temp_blend < 1:
            raise ValueError("wall_temp_blend must lie in [0, 1)")
        if self.tolerance <= 0 or self.outer_tolerance <= 0 or self.outer_relative_tolerance <= 0 or (self.refine_tolerance is not None and self.refine_tolerance <= 0):
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1 or self.outer_max_iterations < 1:
            raise ValueError("iteration limits must be >= 1")


@dataclass(frozen=True)
class SegmentResult:
    outlet_temp: float
    heat_flux: float  # W, positive into the tank
    new_sector_temp: float
    iterations_used: int
    wall_temp_estimate: float
    effectiveness: float
    overall_k: float = 0.0
    total_passes: int = 0  # including the refinement tail
    k_exponent: float = 0.0  # d ln K / d ln(temperature difference)


def _clip(t: float) -> float:
    return min(max(t, T_MIN), T_MAX)


def film_conductance(
    segment: SerpentineSegment,
    flow_rate: float,
    fluid_temp: float,
    wall_temp: float,
    water_temp: float,
    water: PropsOf,
    fluid: PropsOf,
) -> float:
    """Overall K [W/(m2 K)] from the two film coefficients and the wall."""
    return _films(segment, flow_rate, fluid_temp, wall_temp, water_temp, water, fluid)[2]


def _films(segment, flow_rate, fluid_temp, wall_temp, water_temp, water, fluid) -> tuple[float, float, float]:
    fp = fluid(_clip(fluid_temp))
    pr_wall = fluid(_clip(wall_temp)).prandtl
    re = corr.reynolds(flow_rate, segment.inner_diameter, fp)
    h_in = corr.h_from_nu(corr.nu_forced_serpentine(re, fp.prandtl, pr_wall), fp.conductivity, segment.inner_diameter)
    wp = water(_clip(0.5 * (wall_temp + water_temp)))
    gr = corr.grashof(segment.outer_diameter, wall_temp, water_temp, wp)
    h_out = corr.h_from_nu(corr.nu_free_serpentine(gr, wp.prandtl), wp.conductivity, segment.outer_diameter)
    return h_in, h_out, corr.overall_k(h_in, segment.wall_thickness, segment.wall_conductivity, h_out)


def segment_exchange(
    inlet_temp: float,
    sector_temp: float,
    segment: SerpentineSegment,
    flow_rate: float,
    dt: float,
    sector_volume: float,
    cfg: IterationConfig,
    water: PropsOf,
    fluid: PropsOf | None = None,
    k_override: float | None = None,
) -> SegmentResult:
    """Heat exchange of one segment with its sector over ``dt``.

    ``k_override`` replaces the film correlations with a fixed overall
    conductance (used by the closed-form checks). A colder inlet than the
    sector simply gives a negative heat flux.
    """
    if flow_rate <= 0 or dt <= 0:
        raise ValueError("flow_rate and dt must be positive")
    fluid = fluid or water
    t0 = sector_temp
    theta = inlet_temp - t0
    area = segment.exchange_area
    if theta == 0 or area == 0:
        return SegmentResult(inlet_temp, 0.0, t0, 0, inlet_temp, 0.0)

    wp0 = water(_clip(t0))
    capacity = wp0.density * wp0.specific_heat * sector_volume
    t_drive = t0
    t_out = inlet_temp - cfg.initial_effectiveness * theta
    prev = (t_out, t_drive)
    final_tol = cfg.tolerance if cfg.refine_tolerance is None else min(cfg.tolerance, cfg.refine_tolerance)
    met = 0
    for it in range(1, cfg.max_iterations + 1):
        t_av = 0.5 * (inlet_temp + t_out)
        t_wall = t_av - cfg.wall_temp_blend * (t_av - t_drive)
        cp_f = fluid(_clip(t_av)).specific_heat
        if k_override is None:
            _, h_out, k = _films(segment, flow_rate, t_av, t_wall, t_drive, water, fluid)
            # free convection outside: h_out ~ dT^0.2, diluted by the other resistances
            k_exponent = 0.2 * k / h_out if h_out > 0 else 0.0
        else:
            k, k_exponent = k_override, 0.0
        eps = -math.expm1(-k * area / (flow_rate * cp_f))
        # equals F K (T_f - T_drive) with T_f the log-mean fluid temperature
        q = flow_rate * cp_f * eps * (inlet_temp - t_drive)
        t_end = t0 + q * dt / capacity
        t_out_new = inlet_temp - q / (flow_rate * cp_f)
        t_drive_new = 0.5 * (t0 + t_end)
        change = max(abs(t_out_new - t_out), abs(t_drive_new - t_drive))
        prev = (t_out, t_drive)
        t_out, t_drive = t_out_new, t_drive_new
        if not met and change < cfg.tolerance:
            met = it
        if met and (change < final_tol or it == cfg.max_iterations):
            return SegmentResult(
                outlet_temp=t_out,
                heat_flux=q,
                new_sector_temp=t_end,
                iterations_used=met,
                wall_temp_estimate=t_wall,
                effectiveness=(inlet_temp - t_out) / theta,
                overall_k=k,
                total_passes=it,
                k_exponent=k_exponent,
            )
    raise ConvergenceError(
        f"segment in sector {segment.sector_index} did not converge in {cfg.max_iterations} iterations",
        iterates=(prev, (t_out, t_drive)),
        segment_index=segment.sector_index,
    )


@dataclass(frozen=True)
class ChainResult:
    state: TankState
    outlet_temp: float
    segments: tuple[SegmentResult, ...] = field(default=())

    @property
    def heat_flux(self) -> float:
        return sum(s.heat_flux for s in self.segments)

    @property
    def max_iterations(self) -> int:
        return max((s.iterations_used for s in self.segments), default=0)


def chain_pass(
    inlet_temp: float,
    layout: SerpentineLayout,
    state: TankState,
    flow_rate: float,
    dt: float,
    cfg: IterationConfig,
    geometry: TankGeometry,
    water: PropsOf,
    fluid: PropsOf | None = None,
    k_override: float | None = None,
) -> ChainResult:
    """Pass the working fluid through every active segment, top to bottom."""
    if flow_rate <= 0:
        raise ValueError("flow_rate must be positive")
    temps = np.array(state.sector_temps)
    t = inlet_temp
    results = []
    for seg in layout.active_segments:
        try:
            res = segment_exchange(
                t, temps[seg.sector_index], seg, flow_rate, dt, geometry.sector_volume,
                cfg, water, fluid, k_override,
            )
        except ConvergenceError as exc:
            exc.segment_index = seg.sector_index
            raise
        temps[seg.sector_index] = res.new_sector_temp
        t = res.outlet_temp
        results.append(res)
    new_state = state.with_temps(temps) if results else state
    return ChainResult(new_state, t, tuple(results))


PLACEMENTS = ("bottom", "middle", "top", "bottom+top", "all")


def band_sectors(band: str, sector_count: int, bands: int = 3) -> list[int]:
    """Contiguous sector indices covered by one coil band."""
    names = {"bottom": 0, "middle": 1, "top": bands - 1}
    if band not in names:
        raise ValueError(f"unknown coil band {band!r}")
    b = names[band]
    edges = np.linspace(0, sector_count, bands + 1).round().astype(int)
    return list(range(edges[b], edges[b + 1]))


def build_layout(
    placement: str,
    geometry: TankGeometry,
    coil_length: float = 10.0,
    inner_diameter: float = 0.010,
    outer_diameter: float = 0.012,
    wall_conductivity: float = 380.0,
) -> SerpentineLayout:
    """Segments for the rig's three switchable coils.

    Every coil spans a band of one third of the sectors and its length is
    shared equally among them; ``placement`` picks which coils are open.
    """
    if placement not in PLACEMENTS:
        raise ValueError(f"placement must be one of {PLACEMENTS}, got {placement!r}")
    open_bands = {
        "bottom": {"bottom"},
        "middle": {"middle"},
        "top": {"top"},
        "bottom+top": {"bottom", "top"},
        "all": {"bottom", "middle", "top"},
    }[placement]
    segments, flags = [], []
    for band in ("top", "middle", "bottom"):
        sectors = band_sectors(band, geometry.sector_count)
        for idx in reversed(sectors):
            segments.append(
                SerpentineSegment(idx, coil_length / len(sectors), inner_diameter, outer_diameter, wall_conductivity)
            )
            flags.append(band in open_bands)
    return SerpentineLayout(tuple(segments), tuple(flags))
