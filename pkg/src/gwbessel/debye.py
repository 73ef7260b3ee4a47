"""Debye's steepest-descent expansions for J_nu(x) on either side of x = nu.

Below the transition the coefficient polynomials A_m are in coth^2(alpha_D) with
alternating signs; above it the same polynomials appear in cot^2(beta) with every
coefficient positive.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction as F
from typing import Optional

from ._util import band_width, clock, horner, sqrt_one_minus_z2, tan_beta, tanh_minus_alpha
from .core import BesselQuery, ExpansionResult, InvalidInput, Method, PrecisionLossWarning, WrongRegime, reduced_phase

__all__ = ["debye_below", "debye_above", "A_BELOW", "A_ABOVE", "DEBYE_MAX_TERMS"]

DEBYE_MAX_TERMS = 4

#: A_0..A_4 as ascending coefficients in coth^2(alpha_D)
A_BELOW = (
    (F(1),),
    (F(1, 8), F(-5, 24)),
    (F(3, 128), F(-77, 576), F(385, 3456)),
    (F(5, 1024), F(-1521, 25600), F(17017, 138240), F(-17017, 248832)),
    (F(35, 32768), F(-96833, 4300800), F(144001, 1720320), F(-1062347, 9953280), F(1062347, 23887872)),
)
#: A_0..A_4 as ascending coefficients in cot^2(beta)
A_ABOVE = tuple(tuple(abs(c) for c in poly) for poly in A_BELOW)

_A_BELOW_F = tuple(tuple(float(c) for c in p) for p in A_BELOW)
_A_ABOVE_F = tuple(tuple(float(c) for c in p) for p in A_ABOVE)


def _gamma_ratio(m: int) -> float:
    """Gamma(m + 1/2) / Gamma(1/2) = (2m-1)!! / 2^m."""
    r = 1.0
    for j in range(1, m + 1):
        r *= (2 * j - 1) / 2.0
    return r


_G = tuple(_gamma_ratio(m) for m in range(DEBYE_MAX_TERMS + 1))


def _check_m(m_max, policy):
    if m_max is None:
        m_max = DEBYE_MAX_TERMS if policy.max_terms is None else min(DEBYE_MAX_TERMS, policy.max_terms)
    if not (0 <= m_max <= DEBYE_MAX_TERMS) or int(m_max) != m_max:
        raise InvalidInput(f"m_max must be an integer in [0, {DEBYE_MAX_TERMS}], got {m_max}")
    return int(m_max)


def debye_below(query: BesselQuery, m_max: Optional[int] = None) -> ExpansionResult:
    """J_nu(nu sech a) ~ e^{nu(tanh a - a)} / sqrt(2 pi nu tanh a) * sum_m g_m A_m / (nu tanh a / 2)^m."""
    t0 = clock()
    nu, x = query.order, query.argument
    if nu <= 0:
        raise InvalidInput("debye_below needs nu > 0")
    if not (0 < x < nu):
        raise WrongRegime(f"debye_below needs 0 < x < nu, got x={x}, nu={nu}")
    m_max = _check_m(m_max, query.policy)
    z = x / nu
    s = sqrt_one_minus_z2(nu, x)         # tanh(alpha_D)
    u = 1.0 / (s * s)                    # coth^2(alpha_D)
    h = 0.5 * nu * s
    terms = [_G[m] * horner(_A_BELOW_F[m], u) / h ** m for m in range(m_max + 1)]
    lead = math.exp(nu * tanh_minus_alpha(z, s)) / math.sqrt(2.0 * math.pi * nu * s)
    value = lead * math.fsum(terms)
    loss = s * s < band_width(nu)
    if loss:
        warnings.warn(f"debye_below at nu={nu}, x={x} is inside the transition band", PrecisionLossWarning,
                      stacklevel=2)
    return ExpansionResult(value, Method.DEBYE_BELOW, m_max + 1, abs(lead * terms[-1]), clock() - t0, False, loss)


def debye_above(query: BesselQuery, m_max: Optional[int] = None) -> ExpansionResult:
    """J_nu(nu sec b) from Debye's expansion with cosine (even A) and sine (odd A) series.

    The phase nu tan b - nu b - pi/4 is reduced modulo 2 pi in extended precision.
    """
    t0 = clock()
    nu, x = query.order, query.argument
    if nu <= 0:
        raise InvalidInput("debye_above needs nu > 0")
    if not x > nu:
        raise WrongRegime(f"debye_above needs x > nu, got x={x}, nu={nu}")
    m_max = _check_m(m_max, query.policy)
    t = tan_beta(nu, x)
    u = 1.0 / (t * t)                    # cot^2(beta)
    h = 0.5 * nu * t
    cos_terms, sin_terms = [], []
    for m in range(m_max + 1):
        term = _G[m] * horner(_A_ABOVE_F[m], u) / h ** m
        sign = -1.0 if (m // 2) % 2 else 1.0
        (cos_terms if m % 2 == 0 else sin_terms).append(sign * term)
    phase = reduced_phase(nu, x, query.policy.phase_digits) - math.pi / 4.0
    amp = math.sqrt(2.0 / (math.pi * nu * t))
    value = amp * (math.cos(phase) * math.fsum(cos_terms) + math.sin(phase) * math.fsum(sin_terms))
    last = (cos_terms if m_max % 2 == 0 else sin_terms)[-1]
    loss = x / nu - 1.0 < band_width(nu)
    if loss:
        warnings.warn(f"debye_above at nu={nu}, x={x} is inside the transition band", PrecisionLossWarning,
                      stacklevel=2)
    return ExpansionResult(value, Method.DEBYE_ABOVE, m_max + 1, amp * abs(last), clock() - t0, False, loss)
