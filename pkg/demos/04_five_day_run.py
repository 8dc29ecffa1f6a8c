"""Five warmup days plus five reported days of the rig under clear autumn skies.

Writes the per-step CSV, the summary and two SVG plots to ``demos/output/nominal``.
"""

import warnings
from pathlib import Path

from solartank.correlations import CorrelationRangeWarning
from solartank.engine import Simulator
from solartank.results import summarize, write_results
from solartank.scenarios import autumn_weather, nominal_config, run_days

warnings.simplefilter("ignore", CorrelationRangeWarning)

cfg = nominal_config()
result = Simulator(cfg).run(autumn_weather(run_days(cfg)))
out = Path(__file__).parent / "output" / "nominal"
paths = write_results(result, out, plots=True)

s = summarize(result)
print(f"{s['steps']} reported steps")
for d in s["daily"]:
    print(f"day {d['day']}: solar {d['solar_useful_kwh']:.2f} kWh, drawn {d['drawn_kwh']:.2f} kWh, "
          f"lost {d['lost_kwh']:.2f} kWh, efficiency {d['collector_efficiency']:.3f}")
print(f"stratification index {s['stratification_index_k']:.2f} K")
print(f"final profile (bottom to top): {[round(t, 1) for t in s['final_temps_c']]}")
for name, p in paths.items():
    print(f"wrote {p}")
