"""Meissel's First (argument < order), Second (argument > order) and Third
(argument = order) expansions of J_nu(nu z).

Coefficients are hard-coded. The First-expansion terms V_5..V_8 and the Second
expansion's P_4, Q_4 carry the opposite overall sign to the commonly printed
tables; the signs used here are the ones that follow from the continuation of
Debye's u_k polynomials and that make the series converge against the oracle.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import NamedTuple, Optional

from ._util import (band_width, clock, horner, sqrt_one_minus_z2, stirling_remainder, tan_beta,
                    tanh_minus_alpha)
from .core import BesselQuery, ExpansionResult, InvalidInput, Method, PrecisionLossWarning, WrongRegime, reduced_phase

__all__ = [
    "meissel_first", "meissel_second", "meissel_third",
    "meissel_first_terms", "meissel_second_terms", "SecondTerms",
    "THIRD_LAMBDA", "FIRST_MAX_TERMS", "SECOND_MAX_TERMS", "THIRD_MAX_TERMS",
]

FIRST_MAX_TERMS = 8
SECOND_MAX_TERMS = 4
THIRD_MAX_TERMS = 7

# Numerator polynomials in u = z^2 (First) or u = sec^2(beta) (Second), ascending powers.
_N3 = (16.0, -1512.0, -3654.0, -375.0)
_N4 = (32.0, 288.0, 232.0, 13.0)                       # times u
_N5 = (256.0, 78720.0, 1891200.0, 4744640.0, 1914210.0, 67599.0)
_N6 = (48.0, 2580.0, 14884.0, 17493.0, 4242.0, 103.0)  # times u
_N7 = (-2048.0, 881664.0, 99783936.0, 1135145088.0, 2884531440.0, 1965889800.0, 318291750.0, 5635995.0)
_N8 = (1024.0, 248320.0, 5095936.0, 24059968.0, 34280896.0, 15252048.0, 1765936.0, 23797.0)  # times u

#: lambda_m of the Third expansion as exact rationals. lambda_6 and lambda_7 are the
#: values produced by reverting sinh(t) - t = s^3/6; lambda_7 only ever multiplies
#: cos(5 pi / 2) = 0.
THIRD_LAMBDA = (
    Fraction(1), Fraction(1, 60), Fraction(1, 1400), Fraction(1, 25200),
    Fraction(43, 17248000), Fraction(1213, 7207200000),
    Fraction(151439, 12713500800000), Fraction(33227, 38118080000000),
)
# cos(pi (m/3 + 1/6)) / (sqrt(3)/2), periodic in m with period 6
_THIRD_COS = (1, 0, -1, -1, 0, 1)
_HALF_SQRT3 = math.sqrt(3.0) / 2.0


def meissel_first_terms(z: float, nu: float, s: Optional[float] = None) -> list:
    """[V_1, ..., V_8] at (z, nu) for 0 < z < 1.

    ``s`` may pass a more accurate sqrt(1 - z^2) than the one recomputed from z.
    """
    u = z * z
    if s is None:
        s = math.sqrt((1.0 - z) * (1.0 + z))
    w = s * s
    r = 1.0 / w
    rs = 1.0 / s
    return [
        ((2.0 + 3.0 * u) * rs ** 3 - 2.0) / (24.0 * nu),
        -(4.0 * u + u * u) * r ** 3 / (16.0 * nu ** 2),
        -(horner(_N3, u) * rs ** 9 - 16.0) / (5760.0 * nu ** 3),
        -u * horner(_N4, u) * r ** 6 / (128.0 * nu ** 4),
        horner(_N5, u) * rs ** 15 / (322560.0 * nu ** 5) - 1.0 / (1260.0 * nu ** 5),
        -u * horner(_N6, u) * r ** 9 / (192.0 * nu ** 6),
        horner(_N7, u) * rs ** 21 / (3440640.0 * nu ** 7) + 1.0 / (1680.0 * nu ** 7),
        -u * horner(_N8, u) * r ** 12 / (4096.0 * nu ** 8),
    ]


def _clip_terms(k_max, limit, policy, name):
    if k_max is None:
        k_max = limit if policy.max_terms is None else min(limit, policy.max_terms)
    if not (0 <= k_max <= limit) or int(k_max) != k_max:
        raise InvalidInput(f"{name} must be an integer in [0, {limit}], got {k_max}")
    return int(k_max)


def meissel_first(query: BesselQuery, k_max: Optional[int] = None) -> ExpansionResult:
    """J_nu(x) for x < nu from Meissel's First expansion truncated after V_{k_max}.

    The prefactor (nu z)^nu e^{nu s} / (e^nu Gamma(nu+1) (1+s)^nu) is evaluated in
    log space as exp(nu (tanh a - a)) / sqrt(2 pi nu) with Stirling's remainder.
    """
    t0 = clock()
    nu, x = query.order, query.argument
    if nu <= 0:
        raise InvalidInput("meissel_first needs nu > 0")
    if not (0 < x < nu):
        raise WrongRegime(f"meissel_first needs 0 < x < nu, got x={x}, nu={nu}")
    k_max = _clip_terms(k_max, FIRST_MAX_TERMS, query.policy, "k_max")
    z = x / nu
    s = sqrt_one_minus_z2(nu, x)
    V = meissel_first_terms(z, nu, s)
    vsum = math.fsum(V[:k_max])
    log_value = (nu * tanh_minus_alpha(z, s) - 0.5 * math.log(2.0 * math.pi * nu) - stirling_remainder(nu)
                 - 0.5 * math.log(s) - vsum)
    # deep inside the transition band the V_k blow up; report a flagged, finite value
    value = math.exp(min(log_value, 709.0))
    last = abs(V[k_max - 1]) if k_max else abs(V[0])
    loss = s * s < band_width(nu)
    if loss:
        warnings.warn(f"meissel_first at nu={nu}, x={x} is inside the transition band", PrecisionLossWarning,
                      stacklevel=2)
    return ExpansionResult(value, Method.MEISSEL_FIRST, k_max, last * value, clock() - t0, False, loss)


class SecondTerms(NamedTuple):
    p: tuple          # P_1..P_4
    q: tuple          # Q_1..Q_4; Q_1 includes the leading nu (tan b - b)
    lead: float       # nu (tan b - b), unreduced


def _second_parts(nu: float, x: float):
    t = tan_beta(nu, x)
    c = 1.0 / t
    u = (x / nu) ** 2
    c3 = c ** 3
    c6 = c3 * c3
    p = (
        c6 * (4.0 * u + u * u) / (16.0 * nu ** 2),
        -c6 ** 2 * u * horner(_N4, u) / (128.0 * nu ** 4),
        c6 ** 3 * u * horner(_N6, u) / (192.0 * nu ** 6),
        -c6 ** 4 * u * horner(_N8, u) / (4096.0 * nu ** 8),
    )
    qc = (
        -c3 * (2.0 + 3.0 * u) / (24.0 * nu),
        -c3 ** 3 * horner(_N3, u) / (5760.0 * nu ** 3),
        -c3 ** 5 * horner(_N5, u) / (322560.0 * nu ** 5),
        c3 ** 7 * horner(_N7, u) / (3440640.0 * nu ** 7),
    )
    return t, c, p, qc


def meissel_second_terms(nu: float, x: float) -> SecondTerms:
    """P_1..P_4 and Q_1..Q_4 for x > nu (sec beta = x / nu)."""
    t, c, p, qc = _second_parts(nu, x)
    lead = nu * (t - math.atan(t))
    return SecondTerms(p, (lead + qc[0],) + qc[1:], lead)


def meissel_second(query: BesselQuery, k_max: Optional[int] = None) -> ExpansionResult:
    """J_nu(x) for x > nu from Meissel's Second expansion with P, Q truncated at k_max.

    The leading phase nu (tan b - b) is formed and reduced modulo 2 pi in
    ``policy.phase_digits`` working digits before the corrections are added.
    """
    t0 = clock()
    nu, x = query.order, query.argument
    if nu <= 0:
        raise InvalidInput("meissel_second needs nu > 0")
    if not x > nu:
        raise WrongRegime(f"meissel_second needs x > nu, got x={x}, nu={nu}")
    k_max = _clip_terms(k_max, SECOND_MAX_TERMS, query.policy, "k_max")
    t, c, p, qc = _second_parts(nu, x)
    psum = math.fsum(p[:k_max])
    qsum = math.fsum(qc[:k_max])
    phase = reduced_phase(nu, x, query.policy.phase_digits) + qsum - math.pi / 4.0
    amp = math.sqrt(2.0 * c / (nu * math.pi))
    # deep inside the transition band P diverges; report an infinite, flagged value
    value = amp * math.exp(min(-psum, 709.0)) * math.cos(phase)
    j = max(k_max, 1) - 1
    est = amp * (abs(p[j]) + abs(qc[j]))
    loss = x / nu - 1.0 < band_width(nu)
    if loss:
        warnings.warn(f"meissel_second at nu={nu}, x={x} is inside the transition band", PrecisionLossWarning,
                      stacklevel=2)
    return ExpansionResult(value, Method.MEISSEL_SECOND, k_max, est, clock() - t0, False, loss)


def _third_terms(n: float, m_max: int) -> list:
    terms = []
    for m in range(m_max + 1):
        sgn = _THIRD_COS[m % 6]
        if sgn == 0:
            continue
        lam = THIRD_LAMBDA[m]
        e = (2 * m + 1) / 3.0
        terms.append(sgn * _HALF_SQRT3 * (lam.numerator / lam.denominator)
                     * math.gamma(2 * m / 3.0 + 4.0 / 3.0) * (6.0 / n) ** e / math.pi)
    return terms


def meissel_third(n: float, m_max: int = THIRD_MAX_TERMS) -> ExpansionResult:
    """J_n(n) from Meissel's Third expansion with lambda_0..lambda_{m_max}.

    Terms whose cosine factor vanishes (m = 1, 4, 7) are skipped from an exact table.
    """
    t0 = clock()
    if not (math.isfinite(n) and n > 0):
        raise InvalidInput(f"meissel_third needs n > 0, got {n}")
    if not (0 <= m_max <= THIRD_MAX_TERMS) or int(m_max) != m_max:
        raise InvalidInput(f"m_max must be an integer in [0, {THIRD_MAX_TERMS}]")
    terms = _third_terms(n, int(m_max))
    value = math.fsum(terms)
    return ExpansionResult(value, Method.MEISSEL_THIRD, len(terms), abs(terms[-1]), clock() - t0)

