"""Small numerical helpers shared by the expansion modules."""
from __future__ import annotations

import math

import numpy as np
import time

_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156, -3617 / 122400)


def horner(coeffs, u):
    """Evaluate sum_i coeffs[i] * u**i."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def stirling_remainder(nu: float) -> float:
    """lnGamma(nu+1) - (nu ln nu - nu + 0.5 ln(2 pi nu)), accurate for all nu > 0."""
    if nu < 10.0:
        return math.lgamma(nu + 1.0) - (nu * math.log(nu) - nu + 0.5 * math.log(2 * math.pi * nu))
    inv = 1.0 / nu
    inv2 = inv * inv
    s = 0.0
    p = inv
    for c in _STIRLING:
        s += c * p
        p *= inv2
    return s


def alpha_from_z(z: float, s: float) -> float:
    """acosh(1/z) for 0 < z < 1 given s = sqrt(1 - z^2), without cancellation."""
    return math.log1p((1.0 - z + s) / z)


def odd_atanh_tail(s: float, start: int) -> float:
    """sum_{k >= start} s^(2k+1)/(2k+1); the tail of the atanh series."""
    s2 = s * s
    p = s ** (2 * start + 1)
    total = 0.0
    k = start
    while True:
        term = p / (2 * k + 1)
        total += term
        if term <= 1e-18 * total:
            return total
        p *= s2
        k += 1


def tanh_minus_alpha(z: float, s: float) -> float:
    """tanh(a) - a with sech(a) = z and tanh(a) = s; always negative."""
    if s < 0.25:
        return -odd_atanh_tail(s, 1)
    return s - alpha_from_z(z, s)


def sqrt_one_minus_z2(nu: float, x: float) -> float:
    """sqrt(1 - (x/nu)^2) for x < nu, from (nu - x)(nu + x) to keep digits near the transition."""
    return math.sqrt((nu - x) * (nu + x)) / nu


def tan_beta(nu: float, x: float) -> float:
    """tan(beta) with sec(beta) = x/nu > 1."""
    return math.sqrt((x - nu) * (x + nu)) / nu


def band_width(nu: float) -> float:
    """10 nu^(-2/3): relative distance from z = 1 below which the expansions degrade."""
    return 10.0 * nu ** (-2.0 / 3.0)


clock = time.perf_counter


def cbrt(v: float) -> float:
    """Real cube root, exact on perfect cubes (unlike v ** (1/3))."""
    return float(np.cbrt(v))
