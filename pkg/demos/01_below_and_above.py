"""
Away from the turning point
===========================

For x well below or well above the order, a handful of asymptotic terms give
J_nu(x) to near double precision. Here nu = 300 and each value is compared
with the arbitrary-precision series.
"""
import warnings

from gwbessel import BesselQuery
from gwbessel.debye import debye_above, debye_below
from gwbessel.meissel import meissel_first, meissel_second
from gwbessel.oracle import exact_J

warnings.simplefilter("ignore")
nu = 300

print(f"{'x':>6} {'method':>14} {'value':>24} {'rel. error':>11}")
for x in (100.0, 200.0, 250.0, 270.0, 280.0):
    ref = float(exact_J(nu, x, 25).value)
    for r in (meissel_first(BesselQuery(nu, x)), debye_below(BesselQuery(nu, x))):
        print(f"{x:6.0f} {str(r.method):>14} {r.value:24.16e} {abs(r.value / ref - 1):11.1e}")

# Above the transition the function oscillates, so compare absolute errors.
print()
for x in (330.0, 350.0, 400.0, 600.0):
    ref = float(exact_J(nu, x, 25).value)
    for r in (meissel_second(BesselQuery(nu, x)), debye_above(BesselQuery(nu, x))):
        print(f"{x:6.0f} {str(r.method):>14} {r.value:24.16e} {abs(r.value - ref):11.1e}")

# The errors grow as x approaches nu: both families are series in 1/(nu s^3)
# with s = sqrt|1 - (x/nu)^2|, which is small near the turning point.
