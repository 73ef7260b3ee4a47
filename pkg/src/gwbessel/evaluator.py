"""Regime classification and the single entry point :func:`eval_J`.

Each regime has an ordered list of methods. A method's result is accepted when
it is not flagged for precision loss and its error estimate meets the target; a
method that raises, is flagged, or misses the target hands over to the next one.
The oracle closes every list when its working precision stays under the cap.
If nothing meets the target the candidate with the smallest estimate wins.
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

from ._util import cbrt, clock
from .core import (BesselError, BesselQuery, CapExceeded, ExpansionResult, InvalidInput, Method, NoMethodApplicable,
                   PrecisionConfig, PrecisionLossWarning, Regime, RegimeTag, WrongRegime)
from .debye import debye_above, debye_below
from .meissel import meissel_first, meissel_second, meissel_third
from .oracle import MAX_WORKING_DIGITS, exact_J, oracle_feasible
from .transition import EPSILON_RADIUS, epsilon_expansion, watson_above, watson_below

__all__ = ["DispatchPolicy", "classify", "eval_J", "besselj", "small_argument_series", "METHOD_NAMES",
           "run_method"]

_T = RegimeTag
_M = Method


@dataclass(frozen=True)
class DispatchPolicy:
    """Thresholds and per-regime preference lists for :func:`eval_J`.

    ``transition_halfwidth`` is in units of nu^(1/3); ``epsilon_radius`` likewise.
    With ``require_error_target=False`` the first unflagged result is accepted
    whatever its error estimate.
    """

    transition_halfwidth: float = 3.0
    small_arg_factor: float = 0.5
    epsilon_radius: float = EPSILON_RADIUS
    min_asymptotic_order: float = 20.0
    require_error_target: bool = True
    oracle_max_working_digits: int = MAX_WORKING_DIGITS
    small_argument: Tuple[Method, ...] = (_M.SMALL_ARG_SERIES,)
    below: Tuple[Method, ...] = (_M.MEISSEL_FIRST, _M.DEBYE_BELOW)
    transition_below: Tuple[Method, ...] = (_M.EPSILON, _M.WATSON_BELOW)
    diagonal: Tuple[Method, ...] = (_M.MEISSEL_THIRD, _M.EPSILON)
    transition_above: Tuple[Method, ...] = (_M.EPSILON, _M.WATSON_ABOVE)
    above: Tuple[Method, ...] = (_M.MEISSEL_SECOND, _M.DEBYE_ABOVE)

    def __post_init__(self):
        if not self.transition_halfwidth >= 0:
            raise InvalidInput("transition_halfwidth must be >= 0")
        if not self.small_arg_factor >= 0:
            raise InvalidInput("small_arg_factor must be >= 0")
        if not self.epsilon_radius >= 0:
            raise InvalidInput("epsilon_radius must be >= 0")
        for name in ("small_argument", "below", "transition_below", "diagonal", "transition_above", "above"):
            object.__setattr__(self, name, tuple(Method(m) for m in getattr(self, name)))

    def preferences(self, tag: RegimeTag, diagonal: bool = False) -> Tuple[Method, ...]:
        if diagonal:
            return self.diagonal
        return {
            _T.SMALL_ARGUMENT: self.small_argument,
            _T.BELOW: self.below,
            _T.TRANSITION_BELOW: self.transition_below,
            _T.TRANSITION_ABOVE: self.transition_above,
            _T.ABOVE: self.above,
        }[tag]

    @classmethod
    def from_mapping(cls, items: Mapping[str, str]) -> "DispatchPolicy":
        """Build a policy from string key/value pairs, e.g. a parsed policy file.

        Preference lists are comma-separated method names or aliases.
        """
        fields = {f.name: f for f in dataclasses.fields(cls)}
        kwargs = {}
        for key, raw in items.items():
            if key not in fields:
                raise InvalidInput(f"unknown policy key {key!r}")
            default = getattr(cls, key)
            if isinstance(default, tuple):
                kwargs[key] = tuple(parse_method(s) for s in str(raw).split(",") if s.strip())
            elif isinstance(default, bool):
                kwargs[key] = str(raw).strip().lower() in ("1", "true", "yes", "on")
            elif isinstance(default, int):
                kwargs[key] = int(raw)
            else:
                kwargs[key] = float(raw)
        return cls(**kwargs)


#: command-line aliases for every method
METHOD_NAMES: Dict[str, Method] = {
    "meissel1": _M.MEISSEL_FIRST, "meissel2": _M.MEISSEL_SECOND, "meissel3": _M.MEISSEL_THIRD,
    "debye1": _M.DEBYE_BELOW, "debye2": _M.DEBYE_ABOVE, "epsilon": _M.EPSILON,
    "watson1": _M.WATSON_BELOW, "watson2": _M.WATSON_ABOVE, "oracle": _M.ORACLE, "series": _M.SMALL_ARG_SERIES,
}


def parse_method(name: str) -> Method:
    key = name.strip()
    if key.lower() in METHOD_NAMES:
        return METHOD_NAMES[key.lower()]
    try:
        return Method(key)
    except ValueError:
        raise InvalidInput(f"unknown method {name!r}") from None


_LOG2 = math.log(2.0)


def _airy_unit(nu: float) -> float:
    # nu^(1/3), floored at 1 so the margin stays finite at tiny orders
    return cbrt(max(nu, 1.0))


def classify(nu: float, x: float, policy: Optional[DispatchPolicy] = None) -> Regime:
    """Assign (nu, x) to exactly one regime. Ties at the band edges go to the transition."""
    policy = policy or DispatchPolicy()
    if not (math.isfinite(nu) and math.isfinite(x)) or nu < 0 or x < 0:
        raise InvalidInput(f"classify needs finite nu >= 0 and x >= 0, got ({nu}, {x})")
    margin = (x - nu) / _airy_unit(nu)
    if x < policy.small_arg_factor * math.sqrt(nu + 1.0):
        return Regime(_T.SMALL_ARGUMENT, margin)
    if abs(margin) <= policy.transition_halfwidth:
        return Regime(_T.TRANSITION_BELOW if x < nu else _T.TRANSITION_ABOVE, margin)
    return Regime(_T.BELOW if x < nu else _T.ABOVE, margin)


def small_argument_series(query: BesselQuery) -> ExpansionResult:
    """Ascending series in double precision for small x, where it does not cancel.

    The leading factor (x/2)^nu / Gamma(nu+1) is formed in log space.
    """
    t0 = clock()
    nu, x = query.order, query.argument
    if x == 0.0:
        return ExpansionResult(1.0 if nu == 0 else 0.0, _M.SMALL_ARG_SERIES, 1, 0.0, clock() - t0)
    h2 = 0.25 * x * x
    if h2 > nu + 1.0:
        raise CapExceeded("small_argument_series would cancel; argument too large for the order")
    # log(x) - log 2 rather than log(x/2): x/2 underflows for the smallest subnormals
    lead = math.exp(nu * (math.log(x) - _LOG2) - math.lgamma(nu + 1.0))
    terms = [1.0]
    t = 1.0
    k = 0
    while abs(t) > 1e-17:
        k += 1
        t *= -h2 / (k * (nu + k))
        terms.append(t)
    value = lead * math.fsum(terms)
    return ExpansionResult(value, _M.SMALL_ARG_SERIES, k + 1, 4e-16 * abs(value) + abs(lead * t), clock() - t0)


def _oracle(query: BesselQuery, policy: DispatchPolicy) -> ExpansionResult:
    t0 = clock()
    digits = query.policy.resolved_oracle_digits()
    ov = exact_J(query.order, query.argument, digits, max_working_digits=policy.oracle_max_working_digits)
    value = float(ov.value)
    err = abs(value) * 10.0 ** (-min(ov.achieved_digits, 17)) if value else 0.0
    return ExpansionResult(value, _M.ORACLE, digits, err, clock() - t0, rigorous=True)


def run_method(method: Method, query: BesselQuery, policy: Optional[DispatchPolicy] = None) -> ExpansionResult:
    """Evaluate one named method on ``query``, with the policy's validity settings."""
    policy = policy or DispatchPolicy()
    method = Method(method)
    if method is _M.MEISSEL_FIRST:
        return meissel_first(query)
    if method is _M.MEISSEL_SECOND:
        return meissel_second(query)
    if method is _M.MEISSEL_THIRD:
        if query.order != query.argument:
            raise WrongRegime("meissel_third needs argument == order")
        return meissel_third(query.order)
    if method is _M.DEBYE_BELOW:
        return debye_below(query)
    if method is _M.DEBYE_ABOVE:
        return debye_above(query)
    if method is _M.EPSILON:
        return epsilon_expansion(query, validity_radius=policy.epsilon_radius)
    if method is _M.WATSON_BELOW:
        return watson_below(query)
    if method is _M.WATSON_ABOVE:
        return watson_above(query)
    if method is _M.SMALL_ARG_SERIES:
        return small_argument_series(query)
    return _oracle(query, policy)


def _scale(nu: float, x: float, value: float) -> float:
    """Magnitude the relative target refers to: |value|, or the oscillation envelope above the transition."""
    if x > nu:
        envelope = 1.0 / _airy_unit(nu)
        root = math.sqrt(x - nu) * math.sqrt(x + nu)
        if root > 0.0:
            envelope = min(math.sqrt(2.0 / (math.pi * root)), envelope)
        return max(abs(value), envelope)
    return max(abs(value), 1e-300)


def _meets_target(r: ExpansionResult, query: BesselQuery) -> bool:
    if r.precision_loss or r.est_error is None or not math.isfinite(r.value):
        return False
    return r.est_error <= query.policy.target_rel_error * _scale(query.order, query.argument, r.value)


def _dispatch(query: BesselQuery, policy: DispatchPolicy) -> ExpansionResult:
    nu, x = query.order, query.argument
    regime = classify(nu, x, policy)
    methods = list(policy.preferences(regime.tag, diagonal=(x == nu and nu > 0)))
    digits = query.policy.resolved_oracle_digits()
    can_oracle = oracle_feasible(x, digits, policy.oracle_max_working_digits)
    if can_oracle and nu < policy.min_asymptotic_order:
        methods.insert(0, _M.ORACLE)
    elif _M.ORACLE not in methods and can_oracle:
        methods.append(_M.ORACLE)
    candidates = []
    for m in methods:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PrecisionLossWarning)
                r = run_method(m, query, policy)
        except BesselError:
            continue
        if not policy.require_error_target and not r.precision_loss and math.isfinite(r.value):
            return r
        if m is _M.ORACLE or _meets_target(r, query):
            return r
        candidates.append(r)
    if nu < 1.0 and regime.tag is _T.ABOVE:
        return _upward_shift(query, policy)
    finite = [c for c in candidates if math.isfinite(c.value)]
    if not finite:
        raise NoMethodApplicable(f"no method produced a value for nu={nu}, x={x}")
    return min(finite, key=lambda c: (c.precision_loss, c.est_error if c.est_error is not None else math.inf))


def _upward_shift(query: BesselQuery, policy: DispatchPolicy) -> ExpansionResult:
    """J_nu = 2(nu+1)/x J_{nu+1} - J_{nu+2}, for orders below 1 far above the transition."""
    t0 = clock()
    nu, x = query.order, query.argument
    r1 = _dispatch(BesselQuery(nu + 1.0, x, query.policy), policy)
    r2 = _dispatch(BesselQuery(nu + 2.0, x, query.policy), policy)
    c = 2.0 * (nu + 1.0) / x
    value = c * r1.value - r2.value
    err = None if r1.est_error is None or r2.est_error is None else c * r1.est_error + r2.est_error
    return ExpansionResult(value, r2.method, r1.terms_used + r2.terms_used, err, clock() - t0, False,
                           r1.precision_loss or r2.precision_loss)


def eval_J(query: BesselQuery, policy: Optional[DispatchPolicy] = None) -> ExpansionResult:
    """Best available J_nu(x) for ``query`` with method provenance and an error estimate."""
    t0 = clock()
    r = _dispatch(query, policy or DispatchPolicy())
    return dataclasses.replace(r, elapsed=clock() - t0)


def besselj(nu: float, x: float, target_rel_error: float = 1e-10,
            policy: Optional[DispatchPolicy] = None) -> float:
    """Plain float J_nu(x) for nu >= 0, x >= 0."""
    q = BesselQuery(nu, x, PrecisionConfig(target_rel_error=target_rel_error))
    return float(eval_J(q, policy).value)

