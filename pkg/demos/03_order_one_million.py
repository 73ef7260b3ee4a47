"""
Order one million
=================

No arbitrary-precision series can reach nu = 1e6 and x up to 3e7 in reasonable
time, so here the methods are checked against one another: the epsilon
expansion and Watson's formula near the transition, and the Second expansion
against Debye's further out.
"""
import time
import warnings

import numpy as np

from gwbessel import BesselQuery, eval_J
from gwbessel.debye import debye_above
from gwbessel.meissel import meissel_second
from gwbessel.transition import epsilon_expansion, watson_above

warnings.simplefilter("ignore")
nu = 1e6

print(f"{'x - nu':>7} {'epsilon':>14} {'Watson':>14} {'Second':>14}")
for dx in range(20, 261, 40):
    q = BesselQuery(nu, nu + dx)
    e = epsilon_expansion(q, validity_radius=3.0).value
    w = watson_above(q).value
    m = meissel_second(q).value
    print(f"{dx:7d} {e:14.6e} {w:14.6e} {m:14.6e}")

# Far above the transition: the Second expansion and Debye's agree closely,
# and each call takes microseconds.
xs = np.linspace(1.0002e6, 3.25e7, 324)
t0 = time.perf_counter()
vals = [meissel_second(BesselQuery(nu, float(x))).value for x in xs]
dt = (time.perf_counter() - t0) / len(xs)
diff = max(abs(v - debye_above(BesselQuery(nu, float(x))).value) for v, x in zip(vals[10:], xs[10:]))
print(f"\n324 points, {dt * 1e6:.1f} us each; max |Second - Debye| beyond x = {xs[10]:.4g}: {diff:.1e}")

r = eval_J(BesselQuery(nu, 2e7))
print(f"J_1e6(2e7) = {r.value:.15e} via {r.method}")
