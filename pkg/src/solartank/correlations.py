"""Dimensionless groups and Nusselt correlations.

Out-of-range inputs never abort: they raise a :class:`CorrelationRangeWarning`
through :mod:`warnings` (route it to logging with
``logging.captureWarnings(True)``) and the value is still returned.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .properties import FluidProperties

GRAVITY = 9.81

# correlation tag -> (Ra window, Pr window); None means unbounded
_LAYER_WINDOWS = {
    "vertical_cylinder": ((1e8, 2.26e11), (5.7, 6.65)),
    "laminar_turbulent": ((1e-7, 1e12), None),
    "intensive": (None, None),
}

LAMINAR_RE_LIMIT = 2300.0


class CorrelationRangeWarning(UserWarning):
    """A correlation was evaluated outside the window it was derived for."""


class LayerCorrelation(enum.Enum):
    """Nusselt relation for free convection between adjacent tank layers."""

    VERTICAL_CYLINDER = "vertical_cylinder"  # 0.0556 Ra^(1/3)
    LAMINAR_TURBULENT = "laminar_turbulent"  # 0.11 Ra^0.33 + Ra^0.1
    INTENSIVE = "intensive"  # 0.59 Ra^(1/3)


@dataclass(frozen=True)
class DimensionlessState:
    grashof: float
    prandtl: float
    reynolds: float = 0.0

    def __post_init__(self):
        if min(self.grashof, self.prandtl, self.reynolds) < 0:
            raise ValueError("dimensionless groups must be non-negative")

    @property
    def rayleigh(self) -> float:
        return self.grashof * self.prandtl


def _flag(name: str, quantity: str, value: float, window) -> None:
    if window is None:
        return
    lo, hi = window
    if not lo <= value <= hi:
        warnings.warn(
            f"{name}: {quantity} outside [{lo:g}, {hi:g}]",
            CorrelationRangeWarning,
            stacklevel=3,
        )


def grashof(char_length: float, wall_temp: float, bulk_temp: float, props: FluidProperties) -> float:
    """beta g L^3 |T_wall - T_bulk| / nu^2.

    The magnitude is returned; whether buoyancy drives flow is the
    caller's call from the sign of the temperature difference.
    """
    if char_length <= 0:
        raise ValueError("char_length must be positive")
    return (
        props.expansion_coeff
        * GRAVITY
        * char_length**3
        * abs(wall_temp - bulk_temp)
        / props.kinematic_viscosity**2
    )


def reynolds(mass_flow: float, inner_diameter: float, props: FluidProperties) -> float:
    """Pipe Reynolds number from the mean velocity of ``mass_flow`` [kg/s]."""
    area = math.pi * inner_diameter**2 / 4.0
    velocity = mass_flow / (props.density * area)
    return velocity * inner_diameter / props.kinematic_viscosity


def nu_free_serpentine(gr: float, pr: float) -> float:
    """Free convection on the outside of an immersed tube, 0.394 Gr^0.2 Pr^0.25."""
    if gr < 0 or pr <= 0:
        raise ValueError("need gr >= 0 and pr > 0")
    return 0.394 * gr**0.2 * pr**0.25


def nu_forced_serpentine(re: float, pr_fluid: float, pr_wall: float) -> float:
    """Developed turbulent flow inside the tube with a wall-Prandtl correction."""
    if re <= 0 or pr_fluid <= 0 or pr_wall <= 0:
        raise ValueError("re and both Prandtl numbers must be positive")
    if re < LAMINAR_RE_LIMIT:
        warnings.warn(
            f"forced tube correlation: Re below {LAMINAR_RE_LIMIT:g} (laminar)",
            CorrelationRangeWarning,
            stacklevel=2,
        )
    return 0.021 * re**0.8 * pr_fluid**0.43 * (pr_fluid / pr_wall) ** 0.25


def nu_layer(choice: LayerCorrelation, rayleigh: float, pr: float | None = None) -> float:
    if rayleigh < 0:
        raise ValueError("rayleigh must be non-negative")
    ra_window, pr_window = _LAYER_WINDOWS[choice.value]
    if rayleigh > 0:
        _flag(choice.value, "Ra", rayleigh, ra_window)
        if pr is not None:
            _flag(choice.value, "Pr", pr, pr_window)
    if choice is LayerCorrelation.VERTICAL_CYLINDER:
        return 0.0556 * rayleigh ** (1.0 / 3.0)
    if choice is LayerCorrelation.LAMINAR_TURBULENT:
        if rayleigh == 0:
            return 0.0
        return 0.11 * rayleigh**0.33 + rayleigh**0.1
    return 0.59 * rayleigh ** (1.0 / 3.0)


def h_from_nu(nu: float, conductivity: float, char_length: float) -> float:
    if char_length <= 0:
        raise ValueError("char_length must be positive")
    return nu * conductivity / char_length


def overall_k(h_inner: float, wall_thickness: float, wall_conductivity: float, h_outer: float) -> float:
    """Series conductance of inner film, tube wall and outer film [W/(m2 K)].

    A zero film coefficient on either side means no conductance.
    """
    if h_inner < 0 or h_outer < 0 or wall_thickness < 0 or wall_conductivity <= 0:
        raise ValueError("coefficients must be non-negative, wall conductivity positive")
    if h_inner == 0 or h_outer == 0:
        return 0.0
    return 1.0 / (1.0 / h_inner + wall_thickness / wall_conductivity + 1.0 / h_outer)
