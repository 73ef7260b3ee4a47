"""
Inside the transition band
==========================

Within a few nu^(1/3) of x = nu the Meissel and Debye series fail. The epsilon
expansion and Watson's formulas take over; Watson's come with rigorous bounds.
"""
import numpy as np

from gwbessel import BesselQuery
from gwbessel.core import OutOfValidity
from gwbessel.meissel import meissel_third
from gwbessel.oracle import exact_J
from gwbessel.transition import WatsonBound, epsilon_expansion, watson_above, watson_below

nu = 300
bound = WatsonBound(nu)
print(f"{'x':>6} {'epsilon err':>12} {'Watson err':>11} {'Watson bound':>13}")
for x in np.arange(286.0, 317.0, 2.0):
    ref = float(exact_J(nu, x, 25).value)
    try:
        e = abs(epsilon_expansion(BesselQuery(nu, x)).value - ref)
        eps_text = f"{e:12.1e}"
    except OutOfValidity:
        eps_text = f"{'outside':>12}"
    if x < nu:
        w, b = watson_below(BesselQuery(nu, x)), bound.below(x)
    elif x > nu:
        w, b = watson_above(BesselQuery(nu, x)), bound.above()
    else:
        w, b = None, None
    w_text = f"{abs(w.value - ref):11.1e} {b:13.1e}" if w else f"{'-':>11} {'-':>13}"
    print(f"{x:6.0f} {eps_text} {w_text}")

# At x = nu exactly, the Third expansion needs only the order.
ref = float(exact_J(nu, nu, 25).value)
print("\nJ_300(300) Third expansion:", meissel_third(nu).value, " oracle:", ref)
