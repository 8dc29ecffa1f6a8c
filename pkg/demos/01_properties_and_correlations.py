"""Water properties and the Nusselt correlations at a few spot values."""

import warnings

from solartank import correlations as corr
from solartank.properties import TANK_WATER, eval_properties

warnings.simplefilter("ignore", corr.CorrelationRangeWarning)

print(" T [degC]   rho     cp      k      nu [m2/s]   beta [1/K]   Pr")
for t in (5, 20, 40, 60, 80, 95):
    p = eval_properties(TANK_WATER, t)
    print(f"{t:8d} {p.density:7.2f} {p.specific_heat:7.1f} {p.conductivity:6.4f} "
          f"{p.kinematic_viscosity:10.3e} {p.expansion_coeff:11.3e} {p.prandtl:6.2f}")

p20 = eval_properties(TANK_WATER, 20.0)
print()
print(f"Gr for a 10 mm tube, 10 K over 20 degC water: {corr.grashof(0.01, 30.0, 20.0, p20):.3e}")
print(f"free convection on a tube, Gr 1e6, Pr 7:      {corr.nu_free_serpentine(1e6, 7.0):.2f}")
print(f"forced flow in a tube, Re 1e4, Pr 7 / 5:      {corr.nu_forced_serpentine(1e4, 7.0, 5.0):.2f}")
for c in corr.LayerCorrelation:
    print(f"layer correlation {c.value:<18} Ra 1e9:  {corr.nu_layer(c, 1e9):.2f}")
nu = corr.nu_free_serpentine(1e6, 7.0)
h = corr.h_from_nu(nu, 0.598, 0.01)
print(f"h from Nu {nu:.2f} on d_o = 10 mm:             {h:.1f} W/(m2 K)")
print(f"overall K for 1000 | 1 mm copper | 500:       {corr.overall_k(1000.0, 0.001, 380.0, 500.0):.1f} W/(m2 K)")
