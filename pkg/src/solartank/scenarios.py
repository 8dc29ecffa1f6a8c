"""Reference scenarios on synthetic clear-sky weather.

Measured weather for the rig is not available, so the checks, the sweep
defaults and the demos use these cloudless stand-ins.
"""

from __future__ import annotations

import math

from .config import Config
from .consumption import ConsumptionSchedule
from .correlations import LayerCorrelation
from .weather import WeatherSeries, clear_sky


def autumn_weather(days: int) -> WeatherSeries:
    """Mid-latitude autumn: 700 W/m2 peak on the collector plane, 8..20 degC."""
    return clear_sky(days, peak_irradiance=700.0, t_min=8.0, t_max=20.0)


def summer_weather(days: int) -> WeatherSeries:
    """Hot, bright summer: 900 W/m2 peak, 18..32 degC."""
    return clear_sky(days, peak_irradiance=900.0, t_min=18.0, t_max=32.0)


def nominal_config(**overrides) -> Config:
    """Default rig, bottom coil, 250 l/day draw; ``overrides`` as in :meth:`Config.replace`."""
    return Config().replace(**overrides) if overrides else Config()


def bottom_heating_config(**overrides) -> Config:
    """Bottom coil without draw under strong sun.

    Free convection is then the only process carrying heat upward, and the
    intensive-accumulation correlation applies.
    """
    cfg = Config().replace(
        simulation__correlation=LayerCorrelation.INTENSIVE,
        simulation__warmup_days=1,
        simulation__duration_days=1,
        consumption=ConsumptionSchedule.none(),
    )
    return cfg.replace(**overrides) if overrides else cfg


def run_days(config: Config) -> int:
    """Whole days of weather a run of ``config`` needs."""
    sim = config.simulation
    return math.ceil(sim.warmup_days + sim.duration_days)
