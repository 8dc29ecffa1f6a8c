"""The invariant and energy-audit suite behind ``solartank check``."""

import warnings

from solartank.audit import run_checks
from solartank.config import Config
from solartank.correlations import CorrelationRangeWarning

warnings.simplefilter("ignore", CorrelationRangeWarning)

for check in run_checks(Config()):
    print(check.line())
