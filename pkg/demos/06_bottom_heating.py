"""Bottom coil, no draw, strong sun: free convection stirs the whole tank while charging."""

import warnings

import numpy as np

from solartank.correlations import CorrelationRangeWarning
from solartank.engine import Simulator
from solartank.scenarios import bottom_heating_config, run_days, summer_weather

warnings.simplefilter("ignore", CorrelationRangeWarning)

for correlation in ("intensive", "laminar_turbulent"):
    cfg = bottom_heating_config(simulation__correlation=correlation)
    result = Simulator(cfg).run(summer_weather(run_days(cfg)))
    t = result.temps()
    on = result.series("pump_on") > 0
    hours = (result.times % 86400) / 3600
    print(f"{correlation}: max |top - bottom| while charging {np.abs(t[on, -1] - t[on, 0]).max():.2f} K")
    for h in (6, 9, 12, 15, 18, 21):
        k = int(np.argmin(np.abs(hours - h)))
        print(f"   {h:02d}:00  bottom {t[k, 0]:5.1f}  top {t[k, -1]:5.1f}  mean {t[k].mean():5.1f}")
