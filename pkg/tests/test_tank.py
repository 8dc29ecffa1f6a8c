import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solartank.correlations import LayerCorrelation, h_from_nu, nu_layer
from solartank.properties import evaluators
from solartank.tank import (
    ConvectionSettings,
    LossModel,
    SplitRequiredError,
    TankGeometry,
    TankState,
    conduction_step,
    convection_step,
    discharge_step,
    enthalpy,
    heat_capacities,
    loss_step,
)

WATER, _ = evaluators(False)
CONST, _ = evaluators(True)

profiles = st.lists(st.floats(5.0, 95.0), min_size=2, max_size=16)


def geom(n, height=1.7, diameter=0.35, **kw):
    return TankGeometry(height, diameter, n, **kw)


class TestGeometry:
    def test_defaults(self):
        g = TankGeometry()
        assert (g.height, g.internal_diameter, g.sector_count) == (1.7, 0.35, 12)
        assert g.volume == pytest.approx(0.1636, rel=1e-3)
        assert g.sector_volumes.sum() == pytest.approx(math.pi * 0.175**2 * 1.7, rel=1e-9)
        assert len(g.external_areas) == 12

    def test_external_areas_cover_the_shell(self):
        g = TankGeometry()
        shell = math.pi * 0.35 * 1.7 + 2 * g.cross_section
        assert sum(g.external_areas) == pytest.approx(shell)

    @pytest.mark.parametrize("kw", [dict(height=0.3), dict(sector_count=1), dict(insulation_loss_coeff=-1)])
    def test_violations(self, kw):
        args = dict(height=1.7, internal_diameter=0.35, sector_count=12)
        args.update(kw)
        with pytest.raises(ValueError):
            TankGeometry(**args)

    def test_state_is_immutable(self):
        s = TankState(np.array([20.0, 30.0]))
        with pytest.raises(ValueError):
            s.sector_temps[0] = 1.0
        assert s.bottom == 20.0 and s.top == 30.0


class TestDischarge:
    def test_hand_example(self):
        g = geom(2, height=0.5, diameter=0.2)
        out = discharge_step(TankState([20.0, 60.0]), g.sector_volume, 10.0, g)
        np.testing.assert_allclose(out.sector_temps, [10.0, 20.0])

    def test_zero_draw_and_uniform(self):
        g = geom(6)
        s = TankState(np.linspace(20, 60, 6))
        assert discharge_step(s, 0.0, 10.0, g) == s
        u = TankState.uniform(g, 50.0)
        np.testing.assert_array_equal(discharge_step(u, 0.5 * g.sector_volume, 50.0, g).sector_temps, u.sector_temps)

    def test_oversize_draw_rejected(self):
        g = geom(4)
        with pytest.raises(SplitRequiredError):
            discharge_step(TankState.uniform(g, 40.0), 1.01 * g.sector_volume, 10.0, g)

    @given(profiles, st.floats(0.0, 1.0), st.floats(5.0, 20.0))
    def test_mixing_formula(self, temps, frac, t_net):
        g = geom(len(temps))
        v = g.sector_volume
        dv = frac * v
        out = discharge_step(TankState(temps), dv, t_net, g).sector_temps
        lower = [t_net] + temps[:-1]
        expected = [((v - dv) * t + dv * tl) / v for t, tl in zip(temps, lower)]
        np.testing.assert_allclose(out, expected, rtol=1e-14)


class TestConduction:
    def test_uniform_unchanged(self):
        g = TankGeometry()
        s = TankState.uniform(g, 45.0)
        np.testing.assert_allclose(conduction_step(s, 600.0, g, WATER).sector_temps, 45.0, rtol=0, atol=1e-12)

    @given(profiles, st.floats(1.0, 1e6))
    def test_conserves_sum(self, temps, dt):
        g = geom(len(temps))
        out = conduction_step(TankState(temps), dt, g, WATER).sector_temps
        assert out.sum() == pytest.approx(sum(temps), rel=1e-9)

    @given(profiles, st.floats(1.0, 1e8))
    def test_unconditionally_stable(self, temps, dt):
        # the deviation from the mean never grows, however long the step
        g = geom(len(temps))
        dev0 = np.array(temps) - np.mean(temps)
        out = conduction_step(TankState(temps), dt, g, WATER).sector_temps
        dev1 = out - out.mean()
        assert np.linalg.norm(dev1) <= np.linalg.norm(dev0) * (1 + 1e-12) + 1e-12

    @given(profiles, st.floats(1.0, 3600.0))
    def test_bounded_at_practical_steps(self, temps, dt):
        g = geom(len(temps))
        out = conduction_step(TankState(temps), dt, g, WATER).sector_temps
        assert out.min() >= min(temps) - 1e-9 and out.max() <= max(temps) + 1e-9

    def test_cosine_mode_decay(self):
        g = TankGeometry()
        z = g.centers
        mode = np.cos(np.pi * z / g.height)
        s = TankState(40.0 + 10.0 * mode)
        dt, steps = 60.0, 1440
        for _ in range(steps):
            s = conduction_step(s, dt, g, CONST)
        a = CONST(40.0).diffusivity
        amp = (s.sector_temps - 40.0) @ mode / (10.0 * mode @ mode)
        assert amp == pytest.approx(math.exp(-a * (math.pi / g.height) ** 2 * dt * steps), rel=0.01)

    def test_rejects_bad_dt(self):
        g = geom(3)
        with pytest.raises(ValueError):
            conduction_step(TankState.uniform(g, 20.0), 0.0, g, WATER)


class TestLoss:
    def test_hand_value(self):
        # 12 sectors of 13.33 l in a 1.7 m tank
        d = math.sqrt(4 * 12 * 0.01333 / (math.pi * 1.7))
        g = TankGeometry(1.7, d, 12, 0.5, external_areas=(0.2,) * 12)
        assert g.sector_volume == pytest.approx(0.01333, rel=1e-9)
        out, q = loss_step(TankState.uniform(g, 20.0), 600.0, LossModel(0.5, -20.0), g, WATER)
        np.testing.assert_allclose(20.0 - out.sector_temps, 0.043, rtol=0.01)
        assert q == pytest.approx(12 * 0.5 * 0.2 * 40.0)

    def test_at_ambient_unchanged(self):
        g = TankGeometry()
        s = TankState.uniform(g, 18.0)
        out, q = loss_step(s, 600.0, LossModel(0.8, 18.0), g, WATER)
        assert out == s and q == 0.0

    def test_linear_in_dt_and_gains(self):
        g = TankGeometry()
        s = TankState(np.linspace(30, 70, 12))
        loss = LossModel(0.8, 10.0)
        d1 = s.sector_temps - loss_step(s, 300.0, loss, g, WATER)[0].sector_temps
        d2 = s.sector_temps - loss_step(s, 600.0, loss, g, WATER)[0].sector_temps
        np.testing.assert_allclose(d2, 2 * d1, rtol=1e-12)
        warm, q = loss_step(s, 600.0, LossModel(0.8, 90.0), g, WATER)
        assert q < 0 and np.all(warm.sector_temps > s.sector_temps)

    def test_negative_coefficient_rejected(self):
        with pytest.raises(ValueError):
            LossModel(-0.1, 20.0)


class TestConvection:
    def test_stable_profile_untouched(self):
        g = TankGeometry()
        s = TankState(np.linspace(20, 60, 12))
        out, moved = convection_step(s, 600.0, g, ConvectionSettings(), WATER)
        assert out == s and moved == 0.0

    def test_clamped_pair_meets_at_mean(self):
        g = geom(2, height=0.5, diameter=0.3)
        settings = ConvectionSettings(LayerCorrelation.INTENSIVE, substeps=1)
        out, _ = convection_step(TankState([60.0, 20.0]), 1e9, g, settings, CONST)
        np.testing.assert_allclose(out.sector_temps, [40.0, 40.0])

    def test_pair_flux_oracle(self):
        # two sectors of 0.1417 m, 5 K apart around 40 degC, tiny dt so nothing clamps
        g = geom(2, height=2 * 0.1417, diameter=0.25)
        settings = ConvectionSettings(LayerCorrelation.LAMINAR_TURBULENT, "sector", substeps=1)
        dt = 1e-3
        _, moved = convection_step(TankState([42.5, 37.5]), dt, g, settings, WATER)
        p = WATER(40.0)
        ra = p.expansion_coeff * 9.81 * 0.1417**3 * 5.0 / p.kinematic_viscosity**2 * p.prandtl
        nu = nu_layer(LayerCorrelation.LAMINAR_TURBULENT, ra)
        expected = g.cross_section * h_from_nu(nu, p.conductivity, 0.1417) * 5.0 * dt
        assert moved == pytest.approx(expected, rel=1e-12)

    def test_height_scale_is_stronger(self):
        g = TankGeometry()
        s = TankState([50.0] + [30.0] * 11)
        _, by_sector = convection_step(s, 10.0, g, ConvectionSettings(length_scale="sector", substeps=1), WATER)
        _, by_height = convection_step(s, 10.0, g, ConvectionSettings(length_scale="height", substeps=1), WATER)
        assert by_height > by_sector

    @settings(max_examples=60)
    @given(profiles, st.sampled_from(list(LayerCorrelation)), st.sampled_from(["sector", "height"]))
    def test_bounded_conservative_upward(self, temps, choice, scale):
        g = geom(len(temps))
        s = TankState(temps)
        out, moved = convection_step(s, 600.0, g, ConvectionSettings(choice, scale), CONST)
        t = out.sector_temps
        caps = heat_capacities(np.array(temps), g.sector_volumes, CONST)
        assert t.min() >= min(temps) - 1e-9 and t.max() <= max(temps) + 1e-9
        assert caps @ t == pytest.approx(caps @ np.array(temps), rel=1e-12)
        assert moved >= 0.0
        # heat only moves up: the enthalpy above every interface never drops
        above_before = np.cumsum((caps * np.array(temps))[::-1])
        above_after = np.cumsum((caps * t)[::-1])
        assert np.all(above_after >= above_before - 1e-9 * np.abs(above_before))


def test_enthalpy_helper():
    g = geom(3)
    s = TankState([20.0, 30.0, 40.0])
    assert enthalpy(s, g, CONST) == pytest.approx(1000 * 4186 * g.sector_volume * 90.0)
