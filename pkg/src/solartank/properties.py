"""Thermophysical properties of liquid water between 0 and 100 degC.

Values are shape-preserving cubic (PCHIP) interpolants through reference
rows for liquid water at atmospheric pressure (IAPWS-95 / NIST webbook
values). Kinematic viscosity and the Prandtl number are derived from the
interpolated dynamic viscosity, so ``prandtl == nu * rho * cp / k`` holds
exactly.

The interpolant coefficients are computed once with scipy and evaluated
with plain Python arithmetic, because the serpentine iteration calls the
evaluator a few hundred thousand times per simulated week.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

T_MIN = 0.0
T_MAX = 100.0

# Below this the expansion coefficient of water goes through zero (density
# maximum near 4 degC) and buoyancy-driven correlations lose meaning.
BETA_CLAMP_TEMP = 5.0

CONSTANT_DENSITY = 1000.0
CONSTANT_SPECIFIC_HEAT = 4186.0

# T [degC], rho [kg/m3], cp [J/(kg K)], k [W/(m K)], mu [1e-6 Pa s], beta [1e-4 1/K]
REFERENCE_TABLE = np.array(
    [
        [0.0, 999.84, 4219.4, 0.5611, 1791.1, -0.680],
        [5.0, 999.97, 4202.2, 0.5708, 1518.3, 0.160],
        [10.0, 999.70, 4195.5, 0.5800, 1305.9, 0.881],
        [15.0, 999.10, 4188.5, 0.5893, 1138.0, 1.509],
        [20.0, 998.21, 4184.0, 0.5984, 1001.6, 2.066],
        [25.0, 997.05, 4181.6, 0.6072, 890.0, 2.572],
        [30.0, 995.65, 4180.0, 0.6155, 797.2, 3.029],
        [40.0, 992.22, 4179.6, 0.6306, 652.7, 3.853],
        [50.0, 988.03, 4181.4, 0.6436, 546.5, 4.575],
        [60.0, 983.20, 4185.0, 0.6543, 466.0, 5.225],
        [70.0, 977.76, 4190.0, 0.6631, 403.5, 5.823],
        [80.0, 971.79, 4196.6, 0.6700, 354.0, 6.386],
        [90.0, 965.31, 4205.1, 0.6749, 314.6, 6.922],
        [100.0, 958.35, 4215.7, 0.6791, 281.7, 7.440],
    ]
)


class PropertyRangeError(ValueError):
    """Temperature outside the tabulated liquid range."""

    def __init__(self, temperature: float):
        super().__init__(
            f"temperature {temperature!r} degC outside supported range "
            f"[{T_MIN}, {T_MAX}] degC"
        )
        self.temperature = temperature


@dataclass(frozen=True, slots=True)
class FluidProperties:
    density: float  # kg/m3
    specific_heat: float  # J/(kg K)
    conductivity: float  # W/(m K)
    kinematic_viscosity: float  # m2/s
    expansion_coeff: float  # 1/K
    prandtl: float

    @property
    def diffusivity(self) -> float:
        """Thermal diffusivity a = k / (rho cp) [m2/s]."""
        return self.conductivity / (self.density * self.specific_heat)

    @property
    def dynamic_viscosity(self) -> float:
        return self.kinematic_viscosity * self.density


class FluidTag(enum.Enum):
    TANK_WATER = "tank_water"
    WORKING_FLUID = "working_fluid"


@dataclass(frozen=True)
class FluidKind:
    tag: FluidTag = FluidTag.TANK_WATER
    glycol_fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.glycol_fraction <= 1.0:
            raise ValueError("glycol_fraction must lie in [0, 1]")
        if self.tag is FluidTag.TANK_WATER and self.glycol_fraction != 0.0:
            raise ValueError("tank water cannot carry a glycol fraction")


TANK_WATER = FluidKind(FluidTag.TANK_WATER)
WORKING_FLUID = FluidKind(FluidTag.WORKING_FLUID)


class _Piecewise:
    """Scalar evaluator for a scipy PPoly-style cubic."""

    __slots__ = ("breaks", "coeffs", "n")

    def __init__(self, x: np.ndarray, y: np.ndarray):
        pp = PchipInterpolator(x, y)
        self.breaks = [float(v) for v in pp.x]
        self.coeffs = [tuple(float(c) for c in pp.c[:, j]) for j in range(pp.c.shape[1])]
        self.n = len(self.coeffs)

    def __call__(self, t: float) -> float:
        j = bisect.bisect_right(self.breaks, t) - 1
        if j >= self.n:
            j = self.n - 1
        elif j < 0:
            j = 0
        c0, c1, c2, c3 = self.coeffs[j]
        s = t - self.breaks[j]
        return ((c0 * s + c1) * s + c2) * s + c3


_T = REFERENCE_TABLE[:, 0]
_rho = _Piecewise(_T, REFERENCE_TABLE[:, 1])
_cp = _Piecewise(_T, REFERENCE_TABLE[:, 2])
_k = _Piecewise(_T, REFERENCE_TABLE[:, 3])
_mu = _Piecewise(_T, REFERENCE_TABLE[:, 4] * 1e-6)
_beta_rows = _T >= BETA_CLAMP_TEMP
_beta = _Piecewise(_T[_beta_rows], REFERENCE_TABLE[_beta_rows, 5] * 1e-4)

# one bisection serves every column: the expansion-coefficient fit uses the
# same breakpoints from the clamp temperature upward
_BREAKS = _rho.breaks
_BETA_SHIFT = _BREAKS.index(_beta.breaks[0])
_ROWS = [
    _rho.coeffs[j] + _cp.coeffs[j] + _k.coeffs[j] + _mu.coeffs[j] + _beta.coeffs[max(j - _BETA_SHIFT, 0)]
    for j in range(_rho.n)
]
_LAST = _rho.n - 1


def _water(temperature: float, constant: bool) -> FluidProperties:
    t = float(temperature)
    if not T_MIN <= t <= T_MAX:
        raise PropertyRangeError(temperature)
    j = bisect.bisect_right(_BREAKS, t) - 1
    if j > _LAST:
        j = _LAST
    s = t - _BREAKS[j]
    (r0, r1, r2, r3, c0, c1, c2, c3, k0, k1, k2, k3, m0, m1, m2, m3, b0, b1, b2, b3) = _ROWS[j]
    rho = ((r0 * s + r1) * s + r2) * s + r3
    k = ((k0 * s + k1) * s + k2) * s + k3
    mu = ((m0 * s + m1) * s + m2) * s + m3
    if j < _BETA_SHIFT:
        beta = _beta(BETA_CLAMP_TEMP)
    else:
        sb = t - _BREAKS[j] if t > BETA_CLAMP_TEMP else 0.0
        beta = ((b0 * sb + b1) * sb + b2) * sb + b3
    nu = mu / rho
    if constant:
        # viscosity keeps its table value; only the heat-capacity terms freeze
        rho, cp = CONSTANT_DENSITY, CONSTANT_SPECIFIC_HEAT
    else:
        cp = ((c0 * s + c1) * s + c2) * s + c3
    return FluidProperties(rho, cp, k, nu, beta, nu * rho * cp / k)


def _water_reference(temperature: float, constant: bool) -> FluidProperties:
    """Column-by-column evaluation; kept as the check for :func:`_water`."""
    t = float(temperature)
    if not T_MIN <= t <= T_MAX:
        raise PropertyRangeError(temperature)
    k = _k(t)
    mu = _mu(t)
    beta = _beta(t if t > BETA_CLAMP_TEMP else BETA_CLAMP_TEMP)
    nu = mu / _rho(t)
    if constant:
        rho, cp = CONSTANT_DENSITY, CONSTANT_SPECIFIC_HEAT
    else:
        rho, cp = _rho(t), _cp(t)
    return FluidProperties(rho, cp, k, nu, beta, nu * rho * cp / k)


def eval_properties(kind: FluidKind, temperature: float, constant: bool = False) -> FluidProperties:
    """Property bundle for ``kind`` at ``temperature`` [degC].

    ``constant=True`` freezes density and specific heat at 1000 kg/m3 and
    4186 J/(kg K) so energy audits close to round-off.

    The expansion coefficient is held at its 5 degC value below 5 degC.
    Raises :class:`PropertyRangeError` outside 0..100 degC and
    ``NotImplementedError`` for glycol mixtures.
    """
    if kind.glycol_fraction:
        raise NotImplementedError("glycol mixtures have no property data yet")
    return _water(temperature, constant)


@dataclass(frozen=True)
class PropertyEvaluator:
    """Callable ``T -> FluidProperties`` bound to a fluid and property mode."""

    kind: FluidKind = TANK_WATER
    constant: bool = False

    def __post_init__(self):
        if self.kind.glycol_fraction:
            raise NotImplementedError("glycol mixtures have no property data yet")

    def __call__(self, temperature: float) -> FluidProperties:
        return _water(temperature, self.constant)


def evaluators(constant: bool = False, glycol_fraction: float = 0.0):
    """Return ``(tank_water, working_fluid)`` evaluators."""
    return (
        PropertyEvaluator(TANK_WATER, constant),
        PropertyEvaluator(FluidKind(FluidTag.WORKING_FLUID, glycol_fraction), constant),
    )
