"""Which coil to open: layering against collector efficiency on one clear day without draw."""

import warnings

from solartank.config import Config
from solartank.consumption import ConsumptionSchedule
from solartank.correlations import CorrelationRangeWarning
from solartank.scenarios import autumn_weather
from solartank.sweep import format_table, sweep

warnings.simplefilter("ignore", CorrelationRangeWarning)

base = Config().replace(
    simulation__warmup_days=0,
    simulation__duration_days=1,
    consumption=ConsumptionSchedule.none(),
)
axes = {"placement": ["bottom", "middle", "top", "bottom+top", "all"], "flow": ["0.015", "0.025"]}
rows = sweep(base, axes, autumn_weather(1), workers=None)
print(format_table(rows))
