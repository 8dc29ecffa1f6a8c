"""Stratified tank state and the tank-local split processes.

Sectors are equal-volume horizontal slices numbered from the bottom
(index 0) to the top. Every process is a pure ``TankState -> TankState``
function; the engine applies them in sequence inside one time step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

from .correlations import GRAVITY, LayerCorrelation, h_from_nu, nu_layer
from .properties import FluidProperties

PropsOf = Callable[[float], FluidProperties]


class SplitRequiredError(ValueError):
    """A draw larger than one sector volume was passed to the mixing step."""


@dataclass(frozen=True)
class TankGeometry:
    height: float = 1.7
    internal_diameter: float = 0.35
    sector_count: int = 12
    insulation_loss_coeff: float = 0.8  # W/(m2 K)
    external_areas: tuple[float, ...] | None = None

    def __post_init__(self):
        errors = self.violations()
        if errors:
            raise ValueError("; ".join(errors))
        if self.external_areas is None:
            object.__setattr__(self, "external_areas", self._default_areas())

    def violations(self) -> list[str]:
        errors = []
        if self.height <= 0 or self.internal_diameter <= 0:
            errors.append("tank height and diameter must be positive")
        elif self.height / self.internal_diameter < 1:
            errors.append(
                f"height/diameter = {self.height / self.internal_diameter:.3g} < 1, "
                "a one-dimensional tank must be taller than it is wide"
            )
        if int(self.sector_count) != self.sector_count or self.sector_count < 2:
            errors.append(f"sector_count must be an integer >= 2, got {self.sector_count!r}")
        if self.insulation_loss_coeff < 0:
            errors.append("insulation_loss_coeff must be >= 0")
        if self.external_areas is not None and len(self.external_areas) != self.sector_count:
            errors.append("external_areas needs one entry per sector")
        return errors

    def _default_areas(self) -> tuple[float, ...]:
        side = math.pi * self.internal_diameter * self.sector_height
        areas = [side] * self.sector_count
        areas[0] += self.cross_section
        areas[-1] += self.cross_section
        return tuple(areas)

    @property
    def cross_section(self) -> float:
        return math.pi * self.internal_diameter**2 / 4.0

    @property
    def volume(self) -> float:
        return self.cross_section * self.height

    @property
    def sector_height(self) -> float:
        return self.height / self.sector_count

    @property
    def sector_volume(self) -> float:
        return self.volume / self.sector_count

    @property
    def sector_volumes(self) -> np.ndarray:
        return np.full(self.sector_count, self.sector_volume)

    @property
    def centers(self) -> np.ndarray:
        """Sector mid-heights measured from the tank bottom [m]."""
        return (np.arange(self.sector_count) + 0.5) * self.sector_height


@dataclass(frozen=True)
class TankState:
    sector_temps: np.ndarray  # degC, index 0 = bottom
    timestamp: float = 0.0  # s

    def __post_init__(self):
        temps = np.array(self.sector_temps, dtype=float)
        temps.setflags(write=False)
        object.__setattr__(self, "sector_temps", temps)
        if temps.ndim != 1 or temps.size < 2:
            raise ValueError("sector_temps must be a 1-D vector of at least two sectors")

    @classmethod
    def uniform(cls, geometry: TankGeometry, temperature: float, timestamp: float = 0.0) -> "TankState":
        return cls(np.full(geometry.sector_count, float(temperature)), timestamp)

    def with_temps(self, temps) -> "TankState":
        return replace(self, sector_temps=temps)

    @property
    def top(self) -> float:
        return float(self.sector_temps[-1])

    @property
    def bottom(self) -> float:
        return float(self.sector_temps[0])

    def __eq__(self, other):
        if not isinstance(other, TankState):
            return NotImplemented
        return self.timestamp == other.timestamp and np.array_equal(self.sector_temps, other.sector_temps)

    __hash__ = None


@dataclass(frozen=True)
class LossModel:
    loss_coeff: float  # W/(m2 K)
    ambient_temp: float  # degC

    def __post_init__(self):
        if self.loss_coeff < 0:
            raise ValueError("loss_coeff must be >= 0")


@dataclass(frozen=True)
class ConvectionSettings:
    """How the layer-to-layer free convection is evaluated.

    ``length_scale`` picks the length in the Rayleigh number: ``"sector"``
    (the sector height, consistent with the exchange coefficient) or
    ``"height"`` (the whole tank height). ``substeps=None`` lets the sweep
    sub-cycle until the explicit exchange is resolved; ``1`` gives a single
    clamped sweep per step.
    """

    correlation: LayerCorrelation = LayerCorrelation.LAMINAR_TURBULENT
    length_scale: str = "sector"
    substeps: int | None = None
    max_substeps: int = 64

    def __post_init__(self):
        if self.length_scale not in ("sector", "height"):
            raise ValueError("length_scale must be 'sector' or 'height'")
        if self.substeps is not None and self.substeps < 1:
            raise ValueError("substeps must be >= 1")


def heat_capacities(temps: np.ndarray, volumes: np.ndarray, props_of: PropsOf) -> np.ndarray:
    """rho c_p V per sector [J/K] at the given temperatures."""
    out = np.empty(len(temps))
    for i, t in enumerate(temps):
        p = props_of(float(t))
        out[i] = p.density * p.specific_heat * volumes[i]
    return out


def enthalpy(state: TankState, geometry: TankGeometry, props_of: PropsOf) -> float:
    """Sector-summed rho c_p V T on a degC basis [J]."""
    temps = state.sector_temps
    return float(np.dot(heat_capacities(temps, geometry.sector_volumes, props_of), temps))


def discharge_step(state: TankState, draw_volume: float, net_water_temp: float, geometry: TankGeometry) -> TankState:
    """Plug displacement of ``draw_volume`` [m3] drawn at the top, mains in at the bottom.

    Each sector mixes the fraction ``dV/V`` of the sector below it into
    itself, using pre-step temperatures throughout.
    """
    if draw_volume < 0:
        raise ValueError("draw_volume must be >= 0")
    if draw_volume == 0:
        return state
    volume = geometry.sector_volume
    if draw_volume > volume * (1 + 1e-12):
        raise SplitRequiredError(
            f"draw of {draw_volume:.6g} m3 exceeds sector volume {volume:.6g} m3; split it"
        )
    frac = min(draw_volume / volume, 1.0)
    old = state.sector_temps
    below = np.empty_like(old)
    below[0] = net_water_temp
    below[1:] = old[:-1]
    return state.with_temps((1.0 - frac) * old + frac * below)


def conduction_step(state: TankState, dt: float, geometry: TankGeometry, props_of: PropsOf) -> TankState:
    """Crank-Nicolson step of axial conduction with insulated ends.

    The diffusivity is evaluated once at the volume-mean temperature, so
    the scheme conserves the sector-temperature sum to round-off.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    temps = state.sector_temps
    n = temps.size
    a = props_of(float(temps.mean())).diffusivity
    r = a * dt / geometry.sector_height**2

    # L T: second difference with mirrored (zero-flux) ends
    lap = np.empty(n)
    lap[1:-1] = temps[:-2] - 2 * temps[1:-1] + temps[2:]
    lap[0] = temps[1] - temps[0]
    lap[-1] = temps[-2] - temps[-1]
    rhs = temps + 0.5 * r * lap

    ab = np.zeros((3, n))
    ab[0, 1:] = -0.5 * r
    ab[2, :-1] = -0.5 * r
    ab[1, :] = 1 + r
    ab[1, 0] = ab[1, -1] = 1 + 0.5 * r
    return state.with_temps(solve_banded((1, 1), ab, rhs))


def loss_step(
    state: TankState, dt: float, loss: LossModel, geometry: TankGeometry, props_of: PropsOf
) -> tuple[TankState, float]:
    """Explicit ambient loss through each sector's external area.

    Returns the new state and the total loss rate [W] (negative for gains).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    temps = state.sector_temps
    areas = np.asarray(geometry.external_areas)
    q = loss.loss_coeff * areas * (temps - loss.ambient_temp)
    caps = heat_capacities(temps, geometry.sector_volumes, props_of)
    return state.with_temps(temps - q * dt / caps), float(q.sum())


def _pair_conductance(t_low, t_high, props_of, settings, geometry):
    """alpha * F_cross [W/K] for an unstable pair (lower warmer)."""
    dT = t_low - t_high
    p = props_of(0.5 * (t_low + t_high))
    h_layer = geometry.sector_height
    length = h_layer if settings.length_scale == "sector" else geometry.height
    gr = p.expansion_coeff * GRAVITY * length**3 * dT / p.kinematic_viscosity**2
    nu = nu_layer(settings.correlation, gr * p.prandtl, p.prandtl)
    return h_from_nu(nu, p.conductivity, h_layer) * geometry.cross_section


def convection_step(
    state: TankState,
    dt: float,
    geometry: TankGeometry,
    settings: ConvectionSettings,
    props_of: PropsOf,
) -> tuple[TankState, float]:
    """Upward free-convection exchange between adjacent layers.

    Pairs are swept from the bottom to the top using already-updated
    temperatures. A pair exchanges heat only when the lower layer is
    warmer; the lower layer loses exactly what the upper gains, and the
    exchange stops at the pair's heat-capacity-weighted mean.

    Returns the new state and the energy moved upward [J].
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    temps = state.sector_temps.copy()
    if not np.any(temps[:-1] > temps[1:]):
        return state, 0.0
    caps = heat_capacities(temps, geometry.sector_volumes, props_of)
    n_sub = settings.substeps or _auto_substeps(temps, caps, dt, geometry, settings, props_of)
    h = dt / n_sub
    moved = 0.0
    for _ in range(n_sub):
        active = False
        for i in range(temps.size - 1):
            lo, hi = temps[i], temps[i + 1]
            if lo <= hi:
                continue
            active = True
            g = _pair_conductance(lo, hi, props_of, settings, geometry)
            c_lo, c_hi = caps[i], caps[i + 1]
            e_max = c_lo * c_hi / (c_lo + c_hi) * (lo - hi)
            e = min(g * (lo - hi) * h, e_max)
            if e == e_max:
                mean = (c_lo * lo + c_hi * hi) / (c_lo + c_hi)
                temps[i] = temps[i + 1] = mean
            else:
                temps[i] = lo - e / c_lo
                temps[i + 1] = hi + e / c_hi
            moved += e
        if not active:
            break
    return state.with_temps(temps), moved


def _auto_substeps(temps, caps, dt, geometry, settings, props_of) -> int:
    # resolve the fastest unstable pair: exchange over one sub-step at most
    # half of what would equalise it
    rate = 0.0
    for i in range(temps.size - 1):
        if temps[i] > temps[i + 1]:
            g = _pair_conductance(temps[i], temps[i + 1], props_of, settings, geometry)
            rate = max(rate, g * (1.0 / caps[i] + 1.0 / caps[i + 1]))
    n = math.ceil(2.0 * rate * dt) if rate > 0 else 1
    return int(min(max(n, 1), settings.max_substeps))
