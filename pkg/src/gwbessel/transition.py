"""Transition-region methods: the epsilon expansion and Watson's contour-integral
formulas built on K_{1/3} and J_{+-1/3}.

Watson's formulas carry rigorous error bounds, 3/nu * exp(nu (tanh a - a)) below
the transition and 24/nu above it. The epsilon expansion is a power series in
w = x - nu and only holds within a few nu^(1/3) of the transition point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as F
from typing import Mapping, Optional

from ._util import cbrt, clock, odd_atanh_tail, sqrt_one_minus_z2, tan_beta, tanh_minus_alpha
from .core import (BesselQuery, ExpansionResult, InvalidInput, Method, OutOfRange, OutOfValidity, WrongRegime,
                   reduced_phase)
from .oracle import exact_J_fractional_small, exact_K_third

__all__ = [
    "epsilon_expansion", "watson_below", "watson_above", "WatsonBound",
    "EPSILON_B", "EPSILON_MAX_TERMS", "EPSILON_RADIUS", "WATSON_ABOVE_MAX_W",
]

EPSILON_MAX_TERMS = 15
#: default validity radius of the epsilon expansion in units of nu^(1/3)
EPSILON_RADIUS = 1.6
#: largest J_{+-1/3} argument the above-transition formula accepts
WATSON_ABOVE_MAX_W = 50.0
# digits requested from the fractional-order helpers; a few beyond double
_FRACTIONAL_DIGITS = 20


def _b(*pairs):
    """Build ascending coefficients from (power, coefficient) pairs."""
    top = max(p for p, _ in pairs)
    out = [F(0)] * (top + 1)
    for p, c in pairs:
        out[p] = F(c)
    return tuple(out)


#: B_m(w) as ascending exact coefficients in w = x - nu. Entries m = 2, 5, 8, 11, 14
#: are None: sin((m+1) pi / 3) vanishes there, so they never enter the sum.
EPSILON_B = {
    0: _b((0, 1)),
    1: _b((1, 1)),
    2: None,
    3: _b((3, F(1, 6)), (1, F(-1, 15))),
    4: _b((4, F(1, 24)), (2, F(-1, 24)), (0, F(1, 280))),
    5: None,
    6: _b((6, F(1, 720)), (4, F(-7, 1440)), (2, F(1, 288)), (0, F(-1, 3600))),
    7: _b((7, F(1, 5040)), (5, F(-1, 900)), (3, F(19, 12600)), (1, F(-13, 31500))),
    8: None,
    9: _b((9, F(1, 362880)), (7, F(-1, 30240)), (5, F(71, 604800)), (3, F(-121, 907200)), (1, F(7939, 232848000))),
    10: _b((10, F(1, 3628800)), (8, F(-11, 2419200)), (6, F(143, 6048000)), (4, F(-803, 18144000)),
           (2, F(43, 1728000)), (0, F(-1213, 655200000))),
    11: None,
    12: _b((12, F(1, 479001600)), (10, F(-13, 217728000)), (8, F(299, 508032000)), (6, F(-377, 155520000)),
           (4, F(337207, 83825280000)), (2, F(-59503, 27941760000)), (0, F(151439, 977961600000))),
    13: _b((13, F(1, 6227020800)), (11, F(-1, 171072000)), (9, F(11, 145152000)), (7, F(-47, 108864000)),
           (5, F(25853, 23950080000)), (3, F(-266303, 259459200000)), (1, F(169039, 698544000000))),
    14: None,
    15: _b((15, F(1, 1307674368000)), (13, F(-1, 23351328000)), (11, F(113, 125737920000)),
           (9, F(-17, 1905120000)), (7, F(76841, 1760330880000)), (5, F(-37021, 371498400000)),
           (3, F(5141933, 57210753600000)), (1, F(-16720141, 810485676000000))),
}

# sin((m+1) pi/3) / (sqrt(3)/2), period 6 in m
_EPS_SIN = (1, 1, 0, -1, -1, 0)
_HALF_SQRT3 = math.sqrt(3.0) / 2.0


def _eval_poly(coeffs, w: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * w + float(c)
    return acc


@dataclass(frozen=True)
class WatsonBound:
    """Rigorous error bounds of Watson's transition formulas (theta < 1)."""

    nu: float

    def below(self, x: float) -> float:
        """3/nu * exp(nu (tanh a - a)) for x < nu."""
        s = sqrt_one_minus_z2(self.nu, x)
        return 3.0 / self.nu * math.exp(self.nu * tanh_minus_alpha(x / self.nu, s))

    def above(self) -> float:
        return 24.0 / self.nu


def epsilon_expansion(query: BesselQuery, m_max: Optional[int] = None, validity_radius: float = EPSILON_RADIUS,
                      table: Optional[Mapping] = None) -> ExpansionResult:
    """J_nu(x) ~ (1/(3 pi)) sum_m B_m(w) sin((m+1) pi/3) Gamma((m+1)/3) / (x/6)^((m+1)/3), w = x - nu.

    Raises :class:`OutOfValidity` when |x - nu| > validity_radius * nu^(1/3).
    ``table`` substitutes the coefficient table, which is how the zero-sine
    structure is exercised in tests.
    """
    t0 = clock()
    nu, x = query.order, query.argument
    if nu <= 0 or x <= 0:
        raise InvalidInput("epsilon_expansion needs nu > 0 and x > 0")
    if m_max is None:
        p = query.policy.max_terms
        m_max = EPSILON_MAX_TERMS if p is None else min(EPSILON_MAX_TERMS, p)
    if not (0 <= m_max <= EPSILON_MAX_TERMS) or int(m_max) != m_max:
        raise InvalidInput(f"m_max must be an integer in [0, {EPSILON_MAX_TERMS}], got {m_max}")
    w = x - nu
    if abs(w) > validity_radius * cbrt(nu):
        raise OutOfValidity(f"|x - nu| = {abs(w):.4g} exceeds {validity_radius} nu^(1/3); use the Meissel expansions")
    table = EPSILON_B if table is None else table
    r = (6.0 / x) ** (1.0 / 3.0)
    terms = []
    rp = r
    for m in range(int(m_max) + 1):
        sgn = _EPS_SIN[m % 6]
        if sgn:
            e = (m + 1) / 3.0
            terms.append(sgn * _HALF_SQRT3 * _eval_poly(table[m], w) * math.gamma(e) * rp)
        rp *= r
    value = math.fsum(terms) / (3.0 * math.pi)
    return ExpansionResult(value, Method.EPSILON, len(terms), abs(terms[-1]) / (3.0 * math.pi), clock() - t0)


def _watson_below_exponent(nu: float, z: float, s: float) -> float:
    """nu (tanh a + tanh^3 a / 3 - a), which is O(nu s^5) near the transition."""
    if s < 0.3:
        return -nu * odd_atanh_tail(s, 2)
    return nu * (tanh_minus_alpha(z, s) + s ** 3 / 3.0)


def watson_below(query: BesselQuery) -> ExpansionResult:
    """J_nu(x), x < nu, as tanh a / (pi sqrt 3) exp[nu (tanh a + tanh^3 a/3 - a)] K_{1/3}(nu tanh^3 a / 3).

    ``est_error`` is the rigorous bound 3/nu exp(nu (tanh a - a)).
    """
    t0 = clock()
    nu, x = query.order, query.argument
    if nu <= 0:
        raise InvalidInput("watson_below needs nu > 0")
    if not (0 < x < nu):
        raise WrongRegime(f"watson_below needs 0 < x < nu, got x={x}, nu={nu}")
    z = x / nu
    s = sqrt_one_minus_z2(nu, x)
    w = nu * s ** 3 / 3.0
    k = float(exact_K_third(w, _FRACTIONAL_DIGITS).value)
    value = s / (math.pi * math.sqrt(3.0)) * math.exp(_watson_below_exponent(nu, z, s)) * k
    bound = WatsonBound(nu).below(x)
    return ExpansionResult(value, Method.WATSON_BELOW, 1, bound, clock() - t0, rigorous=True)


def watson_above(query: BesselQuery) -> ExpansionResult:
    """J_nu(x), x > nu, from J_{+-1/3}(w) with w = nu tan^3 b / 3.

    Value: tan b / 3 cos(phi) (J_{-1/3} + J_{1/3}) + tan b / sqrt 3 sin(phi) (J_{-1/3} - J_{1/3})
    with phi = nu (tan b - tan^3 b / 3 - b). ``est_error`` is the rigorous bound 24/nu.
    """
    t0 = clock()
    nu, x = query.order, query.argument
    if nu <= 0:
        raise InvalidInput("watson_above needs nu > 0")
    if not x > nu:
        raise WrongRegime(f"watson_above needs x > nu, got x={x}, nu={nu}")
    t = tan_beta(nu, x)
    w = nu * t ** 3 / 3.0
    if w > WATSON_ABOVE_MAX_W:
        raise OutOfRange(f"w = nu tan^3(b)/3 = {w:.4g} > {WATSON_ABOVE_MAX_W}; use meissel_second or debye_above")
    jm = float(exact_J_fractional_small(-1.0 / 3.0, w, _FRACTIONAL_DIGITS).value)
    jp = float(exact_J_fractional_small(1.0 / 3.0, w, _FRACTIONAL_DIGITS).value)
    phi = reduced_phase(nu, x, query.policy.phase_digits, cubic=True)
    value = t / 3.0 * math.cos(phi) * (jm + jp) + t / math.sqrt(3.0) * math.sin(phi) * (jm - jp)
    return ExpansionResult(value, Method.WATSON_ABOVE, 1, WatsonBound(nu).above(), clock() - t0, rigorous=True)
