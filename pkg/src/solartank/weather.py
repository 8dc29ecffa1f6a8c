"""Weather series: CSV ingestion, zero-order-hold lookup, synthetic days."""

from __future__ import annotations

import bisect
import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

WEATHER_COLUMNS = ("t_seconds", "q_s_w_per_m2", "t_ambient_c")
DAY = 86400.0


class WeatherError(ValueError):
    """Malformed or insufficient weather input."""


@dataclass(frozen=True)
class WeatherRecord:
    timestamp: float  # s since run start
    irradiance: float  # W/m2 on the collector plane
    ambient_temp: float  # degC

    def __post_init__(self):
        if self.irradiance < 0:
            raise WeatherError(f"negative irradiance {self.irradiance!r} at t={self.timestamp!r}")


class WeatherSeries(Sequence[WeatherRecord]):
    """Strictly increasing records, each held until the next one."""

    def __init__(self, records: Iterable[WeatherRecord]):
        self._records = tuple(records)
        if not self._records:
            raise WeatherError("no records")
        self._times = [r.timestamp for r in self._records]
        for a, b in zip(self._times, self._times[1:]):
            if not b > a:
                raise WeatherError(f"timestamps not strictly increasing at t={b!r}")

    def __len__(self):
        return len(self._records)

    def __getitem__(self, i):
        return self._records[i]

    def __eq__(self, other):
        return isinstance(other, WeatherSeries) and self._records == other._records

    @property
    def start(self) -> float:
        return self._times[0]

    @property
    def end(self) -> float:
        """End of coverage: the last record is held for one more interval."""
        if len(self._times) == 1:
            return math.inf
        return self._times[-1] + (self._times[-1] - self._times[-2])

    def at(self, t: float) -> WeatherRecord:
        i = bisect.bisect_right(self._times, t) - 1
        if i < 0:
            raise WeatherError(f"no weather record at or before t={t!r}")
        return self._records[i]

    def covers(self, t0: float, t1: float) -> bool:
        return self.start <= t0 and self.end >= t1


def load_weather(path) -> WeatherSeries:
    """Read a ``t_seconds,q_s_w_per_m2,t_ambient_c`` CSV with one header row."""
    path = Path(path)
    records = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise WeatherError(f"{path}: no records")
        if tuple(h.strip() for h in header) != WEATHER_COLUMNS:
            raise WeatherError(f"{path}: header must be {','.join(WEATHER_COLUMNS)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                if len(row) != 3:
                    raise ValueError(f"expected 3 columns, got {len(row)}")
                t, q, ta = (float(c) for c in row)
                records.append(WeatherRecord(t, q, ta))
            except ValueError as exc:
                raise WeatherError(f"{path}:{lineno}: {exc}") from None
    if not records:
        raise WeatherError(f"{path}: no records")
    try:
        return WeatherSeries(records)
    except WeatherError as exc:
        raise WeatherError(f"{path}: {exc}") from None


def write_weather(series: Iterable[WeatherRecord], path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(WEATHER_COLUMNS)
        for r in series:
            w.writerow([repr(r.timestamp), repr(r.irradiance), repr(r.ambient_temp)])


def clear_sky(
    days: int = 1,
    cadence: float = 600.0,
    peak_irradiance: float = 850.0,
    sunrise: float = 6.5,
    sunset: float = 19.5,
    t_min: float = 16.0,
    t_max: float = 28.0,
    coldest_hour: float = 5.0,
    warmest_hour: float = 15.0,
) -> WeatherSeries:
    """Synthetic cloudless days, identical each day.

    Plane irradiance is a half-sine between sunrise and sunset; ambient
    temperature is a cosine with its minimum and maximum at the given hours.
    """
    records = []
    n = int(round(days * DAY / cadence))
    for k in range(n):
        t = k * cadence
        hour = (t % DAY) / 3600.0
        # sample the middle of each logging interval
        h_mid = hour + 0.5 * cadence / 3600.0
        if sunrise < h_mid < sunset:
            q = peak_irradiance * math.sin(math.pi * (h_mid - sunrise) / (sunset - sunrise))
        else:
            q = 0.0
        if coldest_hour <= h_mid <= warmest_hour:
            phase = (h_mid - coldest_hour) / (warmest_hour - coldest_hour)
        else:
            span = 24.0 - (warmest_hour - coldest_hour)
            phase = 1.0 + ((h_mid - warmest_hour) % 24.0) / span
        ta = t_min + 0.5 * (t_max - t_min) * (1 - math.cos(math.pi * phase))
        records.append(WeatherRecord(t, q, ta))
    return WeatherSeries(records)


def tile_days(day: Sequence[WeatherRecord], days: int) -> WeatherSeries:
    """Repeat a one-day series (timestamps within [0, 86400)) ``days`` times."""
    return WeatherSeries(
        WeatherRecord(r.timestamp + d * DAY, r.irradiance, r.ambient_temp) for d in range(days) for r in day
    )
