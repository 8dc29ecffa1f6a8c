"""The collector/coil loop for one step: how the collector inlet settles."""

import warnings

import numpy as np

from solartank.collector import CollectorParams, charge_loop
from solartank.correlations import CorrelationRangeWarning
from solartank.properties import evaluators
from solartank.serpentine import IterationConfig, build_layout
from solartank.tank import TankGeometry, TankState

warnings.simplefilter("ignore", CorrelationRangeWarning)

water, fluid = evaluators()
geometry = TankGeometry()
state = TankState(np.linspace(18.0, 48.0, 12))

for placement in ("bottom", "top", "bottom+top"):
    layout = build_layout(placement, geometry, 10.0, 0.013, 0.015, 380.0)
    loop = charge_loop(state, layout, CollectorParams(), 650.0, 16.0, 0.025, 600.0,
                       IterationConfig(), geometry, water, fluid)
    print(f"{placement}: {loop.outer_iterations} passes, inlet guesses "
          + ", ".join(f"{x:.5f}" for x in loop.history))
    print(f"   collector {loop.collector_in:.2f} -> {loop.collector_out:.2f} degC, useful gain {loop.q_useful:.0f} W")
    print("   sector change [K]:", np.round(loop.state.sector_temps - state.sector_temps, 3))
