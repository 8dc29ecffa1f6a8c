"""Command-line interface: ``simulate``, ``sweep`` and ``check``.

Exit codes: 0 success, 1 invalid input (or a failed check), 2 a numerical
failure during stepping, 3 a file-system error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings

from .audit import run_checks
from .config import Config, ConfigError, load_config
from .consumption import ConsumptionSchedule, load_schedule
from .correlations import CorrelationRangeWarning
from .engine import SimulationError, Simulator
from .results import summarize, write_results
from .scenarios import autumn_weather, run_days
from .serpentine import ConvergenceError
from .sweep import format_table, parse_axis, sweep, write_sweep
from .weather import WeatherError, WeatherSeries, load_weather

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("solartank")


def _config(args) -> Config:
    cfg = load_config(args.config) if args.config else Config()
    if args.constant_properties:
        cfg = cfg.replace(simulation__constant_properties=True)
    return cfg


def _weather(args, cfg: Config) -> WeatherSeries:
    if args.weather:
        return load_weather(args.weather)
    log.info("no weather file given; using synthetic clear-sky autumn days")
    return autumn_weather(run_days(cfg))


def _schedule(args, cfg: Config) -> ConsumptionSchedule:
    return load_schedule(args.schedule) if args.schedule else cfg.consumption


def cmd_simulate(args) -> int:
    cfg = _config(args)
    weather = _weather(args, cfg)
    result = Simulator(cfg).run(weather, _schedule(args, cfg))
    paths = write_results(result, args.out, plots=args.plots)
    s = summarize(result)
    print(f"{s['steps']} steps over {s['days']:g} days")
    print(f"delivered energy      {s['delivered_energy_kwh']:.3f} kWh")
    eff = s["collector_efficiency"]
    print(f"collector efficiency  {'-' if eff is None else format(eff, '.4f')}")
    print(f"stratification index  {s['stratification_index_k']:.3f} K")
    for name, path in paths.items():
        print(f"wrote {name}: {path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    axes = dict(parse_axis(a) for a in args.axis)
    weather = _weather(args, cfg)
    rows = sweep(cfg, axes, weather, _schedule(args, cfg), workers=args.workers)
    print(format_table(rows))
    if args.out:
        from pathlib import Path

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_sweep(rows, out / "sweep.csv")
        print(f"wrote sweep: {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_check(args) -> int:
    checks = run_checks(_config(args), seed=args.seed)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="solartank", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress and correlation range warnings")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, weather=True):
        sp.add_argument("--config", help="JSON configuration; defaults to the experimental rig")
        sp.add_argument("--constant-properties", action="store_true",
                        help="freeze density and specific heat (energy-audit mode)")
        if weather:
            sp.add_argument("--weather", help="CSV with t_seconds,q_s_w_per_m2,t_ambient_c; defaults to clear-sky autumn")
            sp.add_argument("--schedule", help="JSON consumption schedule; defaults to the config's")

    sp = sub.add_parser("simulate", help="run one configuration and write its artifacts")
    common(sp)
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--plots", action="store_true", help="also write SVG plots")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("sweep", help="run a cartesian product of variants")
    common(sp)
    sp.add_argument("--axis", action="append", required=True, metavar="NAME=v1,v2",
                    help="placement=..., flow=... or correlation=...; repeatable")
    sp.add_argument("--out", help="directory for sweep.csv")
    sp.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("check", help="run the invariant and energy-audit suite")
    common(sp, weather=False)
    sp.add_argument("--seed", type=int, default=0, help="seed for randomized profiles")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if not args.verbose:
        warnings.simplefilter("ignore", CorrelationRangeWarning)
    try:
        return args.func(args)
    except (ConvergenceError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, WeatherError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
