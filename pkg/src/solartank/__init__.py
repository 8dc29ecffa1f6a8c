"""One-dimensional stratified hot-water tank charged by immersed coils from a flat-plate collector.

The tank is a stack of horizontal sectors, numbered from the bottom. Each
time step applies discharge, coil charging, axial conduction, ambient
losses and layer free convection in turn.
"""

from .collector import CollectorParams, LoopResult, PumpControl, PumpMode, charge_loop, collector_outlet
from .config import Config, ConfigError, dump_config, load_config
from .consumption import ConsumptionSchedule, load_schedule
from .correlations import CorrelationRangeWarning, LayerCorrelation
from .engine import PROCESSES, RunResult, SimulationError, Simulator, StepReport, run
from .properties import FluidKind, FluidProperties, PropertyRangeError, eval_properties, evaluators
from .results import read_csv, summarize, write_csv, write_results
from .serpentine import (
    ConvergenceError,
    IterationConfig,
    SegmentResult,
    SerpentineLayout,
    SerpentineSegment,
    build_layout,
    chain_pass,
    segment_exchange,
)
from .sweep import sweep
from .tank import LossModel, TankGeometry, TankState, conduction_step, convection_step, discharge_step, loss_step
from .weather import WeatherError, WeatherRecord, WeatherSeries, clear_sky, load_weather

__all__ = [
    "CollectorParams", "LoopResult", "PumpControl", "PumpMode", "charge_loop", "collector_outlet",
    "Config", "ConfigError", "dump_config", "load_config",
    "ConsumptionSchedule", "load_schedule",
    "CorrelationRangeWarning", "LayerCorrelation",
    "PROCESSES", "RunResult", "SimulationError", "Simulator", "StepReport", "run",
    "FluidKind", "FluidProperties", "PropertyRangeError", "eval_properties", "evaluators",
    "read_csv", "summarize", "write_csv", "write_results",
    "ConvergenceError", "IterationConfig", "SegmentResult", "SerpentineLayout", "SerpentineSegment",
    "build_layout", "chain_pass", "segment_exchange",
    "sweep",
    "LossModel", "TankGeometry", "TankState", "conduction_step", "convection_step", "discharge_step", "loss_step",
    "WeatherError", "WeatherRecord", "WeatherSeries", "clear_sky", "load_weather",
]
