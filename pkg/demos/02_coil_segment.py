"""One coil segment in one sector: the fixed-point iteration and its closed-form limit."""

import math
import warnings

from solartank.correlations import CorrelationRangeWarning
from solartank.properties import evaluators
from solartank.serpentine import IterationConfig, SerpentineSegment, segment_exchange
from solartank.tank import TankGeometry

warnings.simplefilter("ignore", CorrelationRangeWarning)

water, _ = evaluators()
geometry = TankGeometry()
seg = SerpentineSegment(sector_index=2, length=2.5, inner_diameter=0.013, outer_diameter=0.015)
flow = 0.025

print("inlet  sector  ->  outlet   q [W]   K [W/m2K]  eff    passes")
for t_in, t_sec in [(45, 40), (60, 30), (75, 20), (20, 50)]:
    r = segment_exchange(t_in, t_sec, seg, flow, 600.0, geometry.sector_volume, IterationConfig(), water)
    print(f"{t_in:5.1f} {t_sec:6.1f}     {r.outlet_temp:7.3f} {r.heat_flux:8.1f} {r.overall_k:9.1f} "
          f"{r.effectiveness:6.3f} {r.iterations_used:4d}")

# a fixed K and a very large sector reduce the segment to an isothermal bath
const, _ = evaluators(constant=True)
print()
print("NTU   outlet    closed form")
for ntu in (0.1, 1.0, 5.0):
    k = ntu * flow * 4186.0 / seg.exchange_area
    r = segment_exchange(60.0, 20.0, seg, flow, 600.0, 1e9, IterationConfig(tolerance=1e-10), const, k_override=k)
    print(f"{ntu:3.1f}  {r.outlet_temp:8.4f}  {20.0 + 40.0 * math.exp(-ntu):8.4f}")
