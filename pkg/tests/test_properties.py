import numpy as np
import pytest
from hypothesis import given, strategies as st

from solartank.properties import (
    CONSTANT_DENSITY,
    CONSTANT_SPECIFIC_HEAT,
    REFERENCE_TABLE,
    TANK_WATER,
    WORKING_FLUID,
    FluidKind,
    FluidTag,
    PropertyRangeError,
    _water_reference,
    eval_properties,
    evaluators,
)

FIELDS = ("density", "specific_heat", "conductivity", "kinematic_viscosity", "expansion_coeff", "prandtl")


def test_spot_values_at_20c():
    p = eval_properties(TANK_WATER, 20.0)
    assert p.conductivity == pytest.approx(0.598, rel=0.01)
    assert p.prandtl == pytest.approx(7.0, rel=0.02)
    assert p.density == pytest.approx(998.0, rel=0.001)


def test_viscosity_at_60c():
    assert eval_properties(TANK_WATER, 60.0).kinematic_viscosity == pytest.approx(4.75e-7, rel=0.01)


@pytest.mark.parametrize(
    "t, rho, mu",
    [  # intermediate rows not in the fitted table (NIST, 1 atm)
        (35.0, 994.03, 719.1e-6),
        (45.0, 990.21, 596.0e-6),
        (55.0, 985.69, 504.1e-6),
        (75.0, 974.84, 377.4e-6),
        (85.0, 968.61, 333.5e-6),
    ],
)
def test_fit_between_table_rows(t, rho, mu):
    p = eval_properties(TANK_WATER, t)
    assert p.density == pytest.approx(rho, rel=0.02)
    assert p.dynamic_viscosity == pytest.approx(mu, rel=0.02)


def test_fit_passes_through_table():
    for row in REFERENCE_TABLE:
        t = row[0]
        p = eval_properties(TANK_WATER, t)
        assert p.density == pytest.approx(row[1], rel=1e-12)
        assert p.specific_heat == pytest.approx(row[2], rel=1e-12)
        assert p.conductivity == pytest.approx(row[3], rel=1e-12)
        assert p.dynamic_viscosity == pytest.approx(row[4] * 1e-6, rel=1e-9)
        if t >= 5.0:
            assert p.expansion_coeff == pytest.approx(row[5] * 1e-4, rel=1e-9)


def test_positive_and_consistent_on_grid():
    for t in np.arange(0.0, 100.5, 1.0):
        p = eval_properties(TANK_WATER, float(t))
        assert all(getattr(p, f) > 0 for f in FIELDS)
        assert p.prandtl == pytest.approx(p.kinematic_viscosity * p.density * p.specific_heat / p.conductivity, rel=0.02)


def test_density_and_viscosity_decrease():
    ts = np.linspace(10.0, 100.0, 901)
    rho = [eval_properties(TANK_WATER, float(t)).density for t in ts]
    nu = [eval_properties(TANK_WATER, float(t)).kinematic_viscosity for t in ts]
    assert np.all(np.diff(rho) < 0)
    assert np.all(np.diff(nu) < 0)


def test_expansion_clamped_below_5c():
    at5 = eval_properties(TANK_WATER, 5.0).expansion_coeff
    assert eval_properties(TANK_WATER, 0.0).expansion_coeff == at5
    assert eval_properties(TANK_WATER, 2.0).expansion_coeff == at5


@pytest.mark.parametrize("t", [-0.1, 100.01, float("nan")])
def test_out_of_range(t):
    with pytest.raises(PropertyRangeError) as info:
        eval_properties(TANK_WATER, t)
    assert str(t) in str(info.value) or "nan" in str(info.value)


def test_constant_mode():
    p = eval_properties(TANK_WATER, 73.0, constant=True)
    assert (p.density, p.specific_heat) == (CONSTANT_DENSITY, CONSTANT_SPECIFIC_HEAT)


def test_working_fluid_defaults_to_water():
    assert WORKING_FLUID.glycol_fraction == 0.0
    assert eval_properties(WORKING_FLUID, 40.0) == eval_properties(TANK_WATER, 40.0)
    with pytest.raises(NotImplementedError):
        eval_properties(FluidKind(FluidTag.WORKING_FLUID, 0.3), 40.0)
    with pytest.raises(ValueError):
        FluidKind(FluidTag.TANK_WATER, 0.1)


def test_evaluators_pair():
    water, fluid = evaluators()
    assert water(30.0) == fluid(30.0)


@given(st.floats(min_value=0.0, max_value=100.0))
def test_fast_path_matches_reference(t):
    fast = eval_properties(TANK_WATER, t)
    ref = _water_reference(t, False)
    assert fast == ref


@given(st.floats(min_value=0.0, max_value=100.0))
def test_pure(t):
    assert eval_properties(TANK_WATER, t) == eval_properties(TANK_WATER, t)
