import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from solartank.config import Config, ConfigError, dump_config, load_config
from solartank.consumption import ConsumptionSchedule, load_schedule
from solartank.correlations import LayerCorrelation
from solartank.engine import Simulator
from solartank.results import csv_columns, read_csv, summarize, write_csv, write_results
from solartank.scenarios import autumn_weather
from solartank.weather import WeatherError, WeatherRecord, WeatherSeries, clear_sky, load_weather, tile_days, write_weather


@pytest.fixture(scope="module")
def one_day():
    cfg = Config().replace(simulation__warmup_days=0, simulation__duration_days=1)
    return Simulator(cfg).run(autumn_weather(1))


class TestConfig:
    def test_empty_file_gives_rig(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("")
        cfg = load_config(p)
        assert cfg == Config()
        p.write_text("{}")
        assert load_config(p) == Config()
        g = cfg.geometry()
        assert (g.height, g.internal_diameter, g.sector_count) == (1.7, 0.35, 12)
        assert cfg.collector.area == 2.0 and cfg.serpentine.coil_length == 10.0
        assert len(cfg.layout().segments) == 12  # three coils over four sectors each

    def test_round_trip(self, tmp_path):
        p = tmp_path / "c.json"
        dump_config(Config(), p)
        assert load_config(p) == Config()
        custom = Config().replace(
            serpentine__placement="bottom+top",
            simulation__correlation=LayerCorrelation.INTENSIVE,
            simulation__initial_tank_temp=(20.0,) * 12,
            consumption=ConsumptionSchedule(180.0, net_water_temp=9.0),
        )
        dump_config(custom, p)
        assert load_config(p) == custom

    def test_single_sector_rejected(self):
        with pytest.raises(ConfigError) as info:
            Config.from_dict({"tank": {"sector_count": 1}})
        assert any("sector_count" in e for e in info.value.errors)

    def test_every_violation_listed(self):
        with pytest.raises(ConfigError) as info:
            Config.from_dict({
                "tank": {"height": 0.2, "colour": "red"},
                "collector": {"heat_removal_factor": 1.5},
                "simulation": {"correlation": "magic"},
                "extras": {},
            })
        text = "\n".join(info.value.errors)
        for fragment in ("height/diameter", "colour", "heat_removal_factor", "magic", "extras"):
            assert fragment in text

    def test_bottom_plus_top_layout(self):
        cfg = Config.from_dict({"serpentine": {"placement": "bottom+top"}})
        active = sorted(s.sector_index for s in cfg.layout().active_segments)
        assert active == [0, 1, 2, 3, 8, 9, 10, 11]

    def test_convection_settings_follow_config(self):
        cfg = Config().replace(simulation__layer_length="sector", simulation__convection_substeps=2)
        c = cfg.simulation.convection()
        assert (c.length_scale, c.substeps) == ("sector", 2)

    def test_bad_json(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{nope")
        with pytest.raises(ValueError):
            load_config(p)


class TestWeather:
    def write(self, tmp_path, text):
        p = tmp_path / "w.csv"
        p.write_text(text)
        return p

    def test_two_rows(self, tmp_path):
        s = load_weather(self.write(tmp_path, "t_seconds,q_s_w_per_m2,t_ambient_c\n0,800,25\n600,750,26\n"))
        assert len(s) == 2 and s[1] == WeatherRecord(600.0, 750.0, 26.0)

    @pytest.mark.parametrize("text", ["", "t_seconds,q_s_w_per_m2,t_ambient_c\n"])
    def test_no_records(self, tmp_path, text):
        with pytest.raises(WeatherError, match="no records"):
            load_weather(self.write(tmp_path, text))

    def test_negative_irradiance_line(self, tmp_path):
        with pytest.raises(WeatherError, match=r":3:"):
            load_weather(self.write(tmp_path, "t_seconds,q_s_w_per_m2,t_ambient_c\n0,800,25\n600,-5,26\n"))

    def test_malformed_line(self, tmp_path):
        with pytest.raises(WeatherError, match=r":2:"):
            load_weather(self.write(tmp_path, "t_seconds,q_s_w_per_m2,t_ambient_c\n0,abc,25\n"))

    def test_non_monotone(self, tmp_path):
        with pytest.raises(WeatherError):
            load_weather(self.write(tmp_path, "t_seconds,q_s_w_per_m2,t_ambient_c\n0,1,2\n600,1,2\n600,1,2\n"))

    def test_header_checked(self, tmp_path):
        with pytest.raises(WeatherError, match="header"):
            load_weather(self.write(tmp_path, "time,q,t\n0,1,2\n"))

    def test_write_load_round_trip(self, tmp_path):
        s = clear_sky(1)
        p = tmp_path / "w.csv"
        write_weather(s, p)
        assert load_weather(p) == s

    def test_hold_and_tile(self):
        s = WeatherSeries([WeatherRecord(0.0, 100.0, 10.0), WeatherRecord(3600.0, 200.0, 12.0)])
        assert s.at(1800.0).irradiance == 100.0 and s.at(3600.0).irradiance == 200.0
        assert s.covers(0.0, 7200.0) and not s.covers(0.0, 7201.0)
        day = clear_sky(1)
        assert tile_days(day, 3) == clear_sky(3)

    def test_clear_sky_shape(self):
        s = clear_sky(1, peak_irradiance=700.0, t_min=8.0, t_max=20.0)
        q = np.array([r.irradiance for r in s])
        ta = np.array([r.ambient_temp for r in s])
        assert q.max() == pytest.approx(700.0, rel=0.01) and q[:36].max() == 0.0
        assert ta.min() >= 8.0 and ta.max() <= 20.0


class TestConsumption:
    def test_default_profile(self):
        c = ConsumptionSchedule()
        assert c.daily_volume == 250.0 and c.net_water_temp == 12.0
        assert math.fsum(c.hourly_fractions) == pytest.approx(1.0, abs=1e-9)

    def test_daily_draw(self):
        c = ConsumptionSchedule()
        total = sum(c.draw(600.0 * k, 600.0 * (k + 1)) for k in range(144))
        assert total == pytest.approx(0.25, rel=1e-12)
        assert c.draw(86400.0, 90000.0) == pytest.approx(c.draw(0.0, 3600.0))

    def test_invalid(self):
        with pytest.raises(ValueError):
            ConsumptionSchedule(hourly_fractions=(1 / 23,) * 23)
        with pytest.raises(ValueError):
            ConsumptionSchedule(daily_volume=-1.0)
        with pytest.raises(ValueError):
            ConsumptionSchedule.from_dict({"litres": 3})

    def test_load(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text(json.dumps({"daily_volume_l": 100.0, "net_water_temp": 8.0}))
        s = load_schedule(p)
        assert (s.daily_volume, s.net_water_temp) == (100.0, 8.0)

    @given(st.floats(0.0, 86400.0), st.floats(0.0, 86400.0))
    def test_draw_additive(self, a, b):
        c = ConsumptionSchedule()
        lo, hi = sorted((a, b))
        mid = 0.5 * (lo + hi)
        assert c.draw(lo, hi) == pytest.approx(c.draw(lo, mid) + c.draw(mid, hi), rel=1e-9, abs=1e-15)


class TestResults:
    def test_single_step(self, one_day, tmp_path):
        paths = write_results(type(one_day)(one_day.config, one_day.reports[:1], one_day.initial_state, one_day.final_state), tmp_path)
        lines = paths["csv"].read_text().splitlines()
        assert len(lines) == 2
        assert json.loads(paths["summary"].read_text())["steps"] == 1
        assert not list(tmp_path.glob("*.svg"))

    def test_row_count_and_columns(self, one_day, tmp_path):
        write_results(one_day, tmp_path)
        data = read_csv(tmp_path / "steps.csv")
        assert list(data) == csv_columns(12)
        assert len(data["timestamp_s"]) == len(one_day) == 144

    def test_parse_back(self, one_day, tmp_path):
        write_csv(one_day.reports, tmp_path / "s.csv")
        data = read_csv(tmp_path / "s.csv")
        for k, r in enumerate(one_day.reports):
            assert data["q_solar_useful_w"][k] == pytest.approx(r.q_solar_useful, abs=5e-7)
            assert data["outer_iterations"][k] == r.outer_iterations
            assert data["energy_residual_j"][k] == pytest.approx(r.energy_residual, rel=5e-7, abs=1e-300)
            for process in ("discharge", "convection"):
                cols = [data[f"{process}_t{i:02d}_c"][k] for i in range(12)]
                np.testing.assert_allclose(cols, r.snapshots[process], atol=5e-7, rtol=0)
            if not r.pump_on:
                assert math.isnan(data["collector_in_c"][k])

    def test_byte_identical(self, one_day, tmp_path):
        write_csv(one_day.reports, tmp_path / "a.csv")
        write_csv(one_day.reports, tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_plots(self, one_day, tmp_path):
        paths = write_results(one_day, tmp_path, plots=True)
        for key in ("temperatures", "profiles"):
            assert paths[key].read_text().lstrip().startswith("<?xml")
        again = tmp_path / "again"
        paths2 = write_results(one_day, again, plots=True)
        assert paths["temperatures"].read_bytes() == paths2["temperatures"].read_bytes()

    def test_summary(self, one_day):
        s = summarize(one_day)
        assert s["steps"] == 144 and len(s["daily"]) == 1
        assert 0 < s["collector_efficiency"] < 0.85 * 0.8
        assert s["delivered_energy_kwh"] == pytest.approx(s["solar_useful_kwh"])
        t = one_day.temps()
        assert s["stratification_index_k"] == pytest.approx(np.mean(t[:, -1] - t[:, 0]))

    def test_empty_reports(self, one_day, tmp_path):
        with pytest.raises(ValueError):
            write_csv([], tmp_path / "x.csv")

    def test_unwritable(self, one_day, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("")
        with pytest.raises(OSError):
            write_results(one_day, blocker / "sub")


def test_enum_fields_accept_values():
    from solartank.collector import PumpControl, PumpMode

    cfg = Config().replace(simulation__correlation="intensive")
    assert cfg.simulation.correlation is LayerCorrelation.INTENSIVE
    assert PumpControl(mode="differential").mode is PumpMode.DIFFERENTIAL
    with pytest.raises(ValueError):
        Config().replace(simulation__correlation="magic")
