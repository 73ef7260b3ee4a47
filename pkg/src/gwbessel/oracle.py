"""Arbitrary-precision ground truth for J_nu(x), plus the fractional-order
helpers J_{+-1/3} and K_{1/3} used by Watson's transition formulas.

Two independent routes are provided for integer orders: the ascending power
series (any real order) and Miller's normalized backward recurrence. Every
routine evaluates at two working precisions and reports the number of digits on
which they agree, so ``achieved_digits`` is measured rather than assumed.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import mpmath

from .core import CapExceeded, InvalidInput, OracleMismatch, OutOfRange, UnderflowWarning, mp_context

__all__ = [
    "OracleMethod", "OracleValue", "exact_J", "backward_recurrence_J",
    "exact_J_fractional_small", "exact_K_third", "series_working_digits",
    "oracle_feasible", "DIGIT_CAP", "MAX_WORKING_DIGITS",
]

#: largest number of digits a caller may request
DIGIT_CAP = 200
#: largest working precision the series is allowed to use (x up to ~5700)
MAX_WORKING_DIGITS = 5000

_LOG10E = math.log10(math.e)
# extra digits of the second (checking) evaluation
_CHECK_DIGITS = 12
# storage context: values are handed out at a fixed precision that is never mutated
_STORE = mpmath.MPContext()
_STORE.dps = DIGIT_CAP + 60


class OracleMethod(str, enum.Enum):
    POWER_SERIES = "PowerSeries"
    BACKWARD_RECURRENCE = "BackwardRecurrence"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class OracleValue:
    value: mpmath.mpf
    achieved_digits: int
    method: OracleMethod

    def __float__(self) -> float:
        return float(self.value)

    def agreement_digits(self, other: "OracleValue") -> int:
        """Number of significant decimal digits on which two oracle values agree."""
        return _agreement(self.value, other.value, _STORE)


def _agreement(a, b, ctx) -> int:
    a = ctx.mpf(a)
    b = ctx.mpf(b)
    diff = abs(a - b)
    if diff == 0:
        return ctx.dps
    scale = max(abs(a), abs(b))
    return max(0, int(math.floor(-float(ctx.log10(diff / scale)))))


def _check_request(digits: int) -> None:
    if not isinstance(digits, int) or digits <= 0:
        raise InvalidInput(f"digits must be a positive int, got {digits!r}")
    if digits > DIGIT_CAP:
        raise CapExceeded(f"requested {digits} digits; cap is {DIGIT_CAP}")


def _refine(fn: Callable, digits: int, guard: int, max_working: int, slot: str) -> tuple:
    """Evaluate ``fn(ctx)`` at two precisions until they agree to ``digits``."""
    for _ in range(6):
        wp = digits + guard
        if wp + _CHECK_DIGITS > max_working:
            raise CapExceeded(
                f"needs {wp + _CHECK_DIGITS} working digits; cap is {max_working}. "
                "Use the asymptotic expansions in this range.")
        v1 = fn(mp_context(wp, slot))
        ctx = mp_context(wp + _CHECK_DIGITS, slot)
        v2 = fn(ctx)
        if v2 == 0 and v1 == 0:
            return _STORE.mpf(0), digits + guard
        achieved = _agreement(v1, v2, ctx)
        if achieved >= digits:
            return _STORE.mpf(v2), achieved
        guard += digits - achieved + 10
    raise CapExceeded(f"could not reach {digits} digits")


def series_working_digits(x: float, digits: int) -> int:
    """Working precision of the ascending series: requested + ceil(0.87 x) + 5 guard digits."""
    return digits + int(math.ceil(0.87 * x)) + 5


def oracle_feasible(x: float, digits: int, max_working_digits: int = MAX_WORKING_DIGITS) -> bool:
    return digits <= DIGIT_CAP and series_working_digits(x, digits) + _CHECK_DIGITS <= max_working_digits


def _validate(nu: float, x: float) -> None:
    if not (math.isfinite(nu) and math.isfinite(x)):
        raise InvalidInput(f"order and argument must be finite, got ({nu}, {x})")
    if x < 0:
        raise InvalidInput(f"argument must be >= 0, got {x}")


def _series(ctx, nu, x):
    """Ascending series sum_k (-1)^k (x/2)^(nu+2k) / (k! Gamma(nu+k+1))."""
    nu = ctx.mpf(nu)
    if x == 0:
        return ctx.mpf(1) if nu == 0 else ctx.mpf(0)
    half = ctx.mpf(x) / 2
    h2 = half * half
    t = ctx.power(half, nu) * ctx.rgamma(nu + 1)
    s = t
    k = 0
    peak = float(half)
    eps = ctx.eps
    while True:
        k += 1
        t = -t * h2 / (k * (nu + k))
        s += t
        if k > peak and abs(t) <= eps * abs(s):
            break
    return s


def exact_J(nu: float, x: float, digits: int = 30, *, cross_check: bool = False,
            max_working_digits: int = MAX_WORKING_DIGITS) -> OracleValue:
    """J_nu(x) to ``digits`` significant digits by the ascending power series.

    Negative integer orders are accepted through J_{-n} = (-1)^n J_n. With
    ``cross_check=True`` and an integer order the value is also computed by
    backward recurrence and :class:`OracleMismatch` is raised on disagreement.
    """
    _validate(nu, x)
    _check_request(digits)
    sign = 1
    if nu < 0:
        if nu != int(nu):
            raise InvalidInput("negative orders are only supported for integers")
        n = -int(nu)
        sign = -1 if n % 2 else 1
        nu = n
    guard = int(math.ceil(0.87 * x)) + 5
    val, achieved = _refine(lambda ctx: _series(ctx, nu, x), digits, guard, max_working_digits, "series")
    out = OracleValue(sign * val, achieved, OracleMethod.POWER_SERIES)
    if cross_check and float(nu).is_integer():
        other = backward_recurrence_J(int(nu), x, digits)
        if _agreement(val, other.value, _STORE) < digits and (val != 0 or other.value != 0):
            raise OracleMismatch(f"series and recurrence disagree at nu={sign * nu}, x={x}")
    return out


def _log10_j_tail(N: int, x: float) -> float:
    """Rough log10 |J_N(x)| for N > x (Debye's leading term)."""
    a = math.acosh(N / x)
    th = math.tanh(a)
    return (N * (th - a) - 0.5 * math.log(2 * math.pi * N * th)) * _LOG10E


def _recurrence_start(n: int, x: float, digits: int) -> int:
    top = max(abs(n), int(math.ceil(x))) + max(40, int(math.ceil(10 * math.sqrt(x))))
    # push the start further out until J_top is negligible at this precision
    while _log10_j_tail(top, x) > -(digits + 5):
        top += max(10, top // 10)
    return top


def _recurrence(ctx, n, x):
    """Miller's algorithm normalized by J_0 + 2 sum_k J_2k = 1; returns J_n (n may be < 0)."""
    X = ctx.mpf(x)
    top = _recurrence_start(n, x, ctx.dps)
    two_over_x = 2 / X
    j_next = ctx.mpf(0)
    j_cur = ctx.mpf(10) ** (-ctx.dps)
    norm = ctx.mpf(0)
    target = None
    for k in range(top, 0, -1):
        # j_cur holds J_k, compute J_{k-1}
        j_prev = k * two_over_x * j_cur - j_next
        if k == n:
            target = j_cur
        if k % 2 == 0:
            norm += 2 * j_cur
        j_next, j_cur = j_cur, j_prev
    # j_cur is J_0 now
    norm += j_cur
    if n == 0:
        target = j_cur
    elif n < 0:
        # keep running the same recurrence below zero: J_{-1}, J_{-2}, ...
        for k in range(0, n, -1):
            j_prev = k * two_over_x * j_cur - j_next
            j_next, j_cur = j_cur, j_prev
        target = j_cur
    return target / norm


def backward_recurrence_J(n: int, x: float, digits: int = 30) -> OracleValue:
    """Integer-order J_n(x) by normalized backward recurrence.

    The recurrence starts at max(|n|, x) + max(40, ceil(10 sqrt(x))). Negative
    ``n`` continues the same recurrence below order zero, so the reflection
    J_{-n} = (-1)^n J_n is an output of the recurrence rather than an input.
    """
    if int(n) != n:
        raise InvalidInput("backward recurrence needs an integer order")
    n = int(n)
    _validate(n, x)
    _check_request(digits)
    if x == 0:
        return OracleValue(_STORE.mpf(1 if n == 0 else 0), digits, OracleMethod.BACKWARD_RECURRENCE)
    guard = 20 + int(math.ceil(math.log10(abs(n) + x + 50)))
    val, achieved = _refine(lambda ctx: _recurrence(ctx, n, x), digits, guard, MAX_WORKING_DIGITS, "recur")
    return OracleValue(val, achieved, OracleMethod.BACKWARD_RECURRENCE)


_THIRD = (-1 / 3, 1 / 3)


def exact_J_fractional_small(order: float, w: float, digits: int = 30) -> OracleValue:
    """J_{+1/3}(w) or J_{-1/3}(w) for 0 <= w <= 50 by the ascending series."""
    if not any(abs(order - o) < 1e-12 for o in _THIRD):
        raise InvalidInput(f"order must be +1/3 or -1/3, got {order}")
    _validate(0.0, w)
    if w > 50:
        raise OutOfRange(f"w={w} > 50; use meissel_second or debye_above at this distance")
    _check_request(digits)
    if w == 0 and order < 0:
        raise InvalidInput("J_{-1/3}(w) diverges as w -> 0")
    third = 1 if order > 0 else -1
    guard = int(math.ceil(0.87 * w)) + 5

    def fn(ctx):
        return _series(ctx, third * ctx.mpf(1) / 3, w)

    val, achieved = _refine(fn, digits, guard, MAX_WORKING_DIGITS, "series")
    return OracleValue(val, achieved, OracleMethod.POWER_SERIES)


def _k_third(ctx, w):
    W = ctx.mpf(w)
    half = W / 2
    h2 = half * half
    third = ctx.mpf(1) / 3
    total = ctx.mpf(0)
    for sgn in (-1, 1):
        nu = sgn * third
        t = ctx.power(half, nu) * ctx.rgamma(nu + 1)
        s = t
        k = 0
        while True:
            k += 1
            t = t * h2 / (k * (nu + k))
            s += t
            if k > float(half) and t <= ctx.eps * s:
                break
        total += -sgn * s
    # K = pi (I_{-1/3} - I_{1/3}) / (2 sin(pi/3))
    return ctx.pi * total / (2 * ctx.sin(ctx.pi * third))


def exact_K_third(w: float, digits: int = 30) -> OracleValue:
    """Modified Bessel K_{1/3}(w) for 0 < w <= 700 from the I_{+-1/3} series.

    The difference of the two series cancels about 2 w log10(e) digits, which are
    added as guard digits.
    """
    if not math.isfinite(w) or w <= 0:
        raise InvalidInput(f"w must be positive and finite, got {w}")
    if w > 700:
        raise OutOfRange(f"w={w} > 700 would underflow")
    _check_request(digits)
    guard = int(math.ceil(2 * w * _LOG10E)) + 10
    val, achieved = _refine(lambda ctx: _k_third(ctx, w), digits, guard, MAX_WORKING_DIGITS, "kthird")
    f = float(val)
    if f == 0.0 or abs(f) < 2.2250738585072014e-308:
        warnings.warn(f"K_1/3({w}) underflows double precision", UnderflowWarning, stacklevel=2)
    return OracleValue(val, achieved, OracleMethod.POWER_SERIES)
