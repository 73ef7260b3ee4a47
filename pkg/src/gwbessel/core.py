"""Shared value types, precision policy and the error taxonomy."""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass, field
from typing import Optional, Union

import mpmath

__all__ = [
    "BesselError", "InvalidInput", "WrongRegime", "OutOfRange", "OutOfValidity",
    "CapExceeded", "NoMethodApplicable", "PoleInParameters", "OracleMismatch",
    "PrecisionLossWarning", "TruncationWarning", "UnderflowWarning",
    "Method", "RegimeTag", "Regime", "PrecisionConfig", "BesselQuery",
    "ExpansionResult", "reduced_phase",
]


class BesselError(Exception):
    """Base class for every error raised by this package."""


class InvalidInput(BesselError, ValueError):
    pass


class WrongRegime(BesselError, ValueError):
    """The requested expansion does not apply on this side of the transition."""


class OutOfRange(BesselError, ValueError):
    pass


class OutOfValidity(BesselError, ValueError):
    """The argument lies outside the configured validity radius of an expansion."""


class CapExceeded(BesselError):
    """The oracle (or a high-precision series) would need more digits than allowed."""


class NoMethodApplicable(BesselError):
    pass


class PoleInParameters(BesselError, ValueError):
    pass


class OracleMismatch(BesselError, ArithmeticError):
    """The two oracle routes disagreed beyond the requested digits."""


class PrecisionLossWarning(UserWarning):
    """Expansion evaluated inside the transition band where it degrades."""


class TruncationWarning(UserWarning):
    pass


class UnderflowWarning(UserWarning):
    pass


class Method(str, enum.Enum):
    MEISSEL_FIRST = "MeisselFirst"
    MEISSEL_SECOND = "MeisselSecond"
    MEISSEL_THIRD = "MeisselThird"
    DEBYE_BELOW = "DebyeBelow"
    DEBYE_ABOVE = "DebyeAbove"
    EPSILON = "Epsilon"
    WATSON_BELOW = "WatsonBelow"
    WATSON_ABOVE = "WatsonAbove"
    ORACLE = "Oracle"
    SMALL_ARG_SERIES = "SmallArgSeries"

    def __str__(self) -> str:
        return self.value


class RegimeTag(str, enum.Enum):
    SMALL_ARGUMENT = "SmallArgument"
    BELOW = "Below"
    TRANSITION_BELOW = "TransitionBelow"
    TRANSITION_ABOVE = "TransitionAbove"
    ABOVE = "Above"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    # (x - nu) / nu**(1/3): signed distance in Airy units
    margin: float


@dataclass(frozen=True)
class PrecisionConfig:
    """Accuracy knobs shared by all evaluation paths.

    ``oracle_digits="auto"`` resolves to ``ceil(-log10(target_rel_error)) + 5``.
    ``max_terms=None`` means every tabulated term of an expansion.
    """

    target_rel_error: float = 1e-10
    oracle_digits: Union[int, str] = "auto"
    max_terms: Optional[int] = None
    phase_digits: int = 34

    def __post_init__(self):
        if not (0.0 < self.target_rel_error < 1.0):
            raise InvalidInput(f"target_rel_error must lie in (0, 1), got {self.target_rel_error}")
        if self.oracle_digits != "auto":
            if not isinstance(self.oracle_digits, int) or self.oracle_digits <= 0:
                raise InvalidInput(f"oracle_digits must be a positive int or 'auto', got {self.oracle_digits!r}")
        if self.max_terms is not None and self.max_terms < 0:
            raise InvalidInput("max_terms must be non-negative")
        if self.phase_digits < 17:
            raise InvalidInput("phase_digits below double precision makes no sense")

    @property
    def target_digits(self) -> int:
        return int(math.ceil(-math.log10(self.target_rel_error)))

    def resolved_oracle_digits(self) -> int:
        if self.oracle_digits == "auto":
            return self.target_digits + 5
        return int(self.oracle_digits)


@dataclass(frozen=True)
class BesselQuery:
    """An (order, argument) pair plus the precision policy to evaluate it with."""

    order: float
    argument: float
    policy: PrecisionConfig = field(default_factory=PrecisionConfig)

    def __post_init__(self):
        nu, x = self.order, self.argument
        if not (math.isfinite(nu) and math.isfinite(x)):
            raise InvalidInput(f"order and argument must be finite, got ({nu}, {x})")
        if x < 0:
            raise InvalidInput(f"argument must be >= 0, got {x}")
        if nu < 0:
            raise InvalidInput(f"order must be >= 0, got {nu}")
        object.__setattr__(self, "order", float(nu))
        object.__setattr__(self, "argument", float(x))

    @property
    def nu(self) -> float:
        return self.order

    @property
    def x(self) -> float:
        return self.argument

    @property
    def z(self) -> float:
        return self.argument / self.order

    @property
    def alpha_d(self) -> float:
        """Debye's parameter, sech(alpha_d) = z, defined for z < 1."""
        if self.argument >= self.order:
            raise WrongRegime("alpha_d needs argument < order")
        return math.acosh(self.order / self.argument)

    @property
    def beta(self) -> float:
        """sec(beta) = z, defined for z > 1."""
        if self.argument <= self.order:
            raise WrongRegime("beta needs argument > order")
        return math.atan2(math.sqrt((self.argument - self.order) * (self.argument + self.order)),
                          self.order)


@dataclass(frozen=True)
class ExpansionResult:
    """Value returned by every evaluation path.

    ``est_error`` is an absolute error estimate. It is a rigorous bound only when
    ``rigorous`` is true (Watson formulas and the oracle); for asymptotic series
    it is the size of the last retained term. ``None`` means unknown.
    """

    value: Union[float, complex]
    method: Method
    terms_used: int
    est_error: Optional[float]
    elapsed: float
    rigorous: bool = False
    precision_loss: bool = False

    def __float__(self) -> float:
        return float(self.value)


_tls = threading.local()


def mp_context(digits: int, slot: str = "default") -> mpmath.MPContext:
    """Per-thread mpmath context set to ``digits`` decimal digits.

    Each ``slot`` owns an independent context so nested routines cannot clobber
    each other's precision.
    """
    pool = getattr(_tls, "pool", None)
    if pool is None:
        pool = _tls.pool = {}
    ctx = pool.get(slot)
    if ctx is None:
        ctx = pool[slot] = mpmath.MPContext()
    ctx.dps = digits
    return ctx


def reduced_phase(nu: float, x: float, digits: int = 34, cubic: bool = False) -> float:
    """Return nu*(tan b - b) reduced into (-pi, pi], with sec b = x/nu.

    With ``cubic=True`` the Watson phase nu*(tan b - tan(b)**3/3 - b) is returned
    instead. Evaluated in ``digits`` working digits, since the raw phase can hold
    eight or more integer digits.
    """
    ctx = mp_context(digits, "phase")
    X = ctx.mpf(x)
    N = ctx.mpf(nu)
    root = ctx.sqrt((X - N) * (X + N))        # nu * tan(beta)
    b = ctx.atan2(root, N)
    if cubic:
        t = root / N
        ph = root - N * t ** 3 / 3 - N * b
    else:
        ph = root - N * b
    twopi = 2 * ctx.pi
    ph = ph - twopi * ctx.nint(ph / twopi)
    return float(ph)
