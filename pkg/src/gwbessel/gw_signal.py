"""Fourier transform of the Doppler-shifted pulsar gravitational-wave signal as a
truncated triple sum over (n, l, m) of psi0 * psi1 * psi2 * psi3 * psi4.

The order-n Bessel factor in psi1 goes through :func:`gwbessel.evaluator.eval_J`,
which is where large orders and arguments enter. The other factors are an
associated Legendre function, spherical harmonics, a geometric sum, Gamma
ratios and a 1F3 hypergeometric series.
"""
from __future__ import annotations

import ast
import cmath
import csv
import math
import operator
import warnings
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy import special

from .core import (BesselQuery, CapExceeded, InvalidInput, Method, PoleInParameters, PrecisionConfig,
                   TruncationWarning, mp_context)
from .evaluator import DispatchPolicy, eval_J

__all__ = [
    "GwParams", "SignalTerm", "SignalResult", "b_orb", "psi0", "psi1", "psi2", "psi3", "psi4",
    "assoc_legendre", "spherical_harmonic", "hypergeom_1F3", "ft_signal", "preset", "PRESETS",
    "load_params", "parse_params", "write_terms_csv", "HYP_CAP",
]

DAY = 86400.0
#: largest |x| accepted by :func:`hypergeom_1F3`
HYP_CAP = 1e4


@dataclass(frozen=True)
class GwParams:
    """Physical and truncation parameters of the signal sum (SI units, radians).

    ``omega=None`` means omega = omega0 = 2 pi f0. ``bessel_arg`` and ``k_value``
    override the derived Bessel argument X = 2 pi f0 A sin(theta)/c and the
    Doppler scale k, which is how the desk-scale presets are built.
    ``n_range=None`` picks |n| <= X + 10 X^(1/3) + 20, beyond which J_n(X) is
    negligible.
    """

    f0: float = 1000.0
    omega: Optional[float] = None
    T_rE: float = DAY
    T_orb: float = 365.0 * DAY
    A: float = 1.5e11
    R_E: float = 6.371e6
    c: float = 299792458.0
    alpha: float = math.pi / 4
    theta: float = math.pi / 3
    phi: float = 1.0
    R: int = 1
    n_range: Optional[Tuple[int, int]] = None
    l_max: int = 20
    bessel_arg: Optional[float] = None
    k_value: Optional[float] = None

    def __post_init__(self):
        for name in ("f0", "T_rE", "T_orb", "A", "R_E", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidInput(f"{name} must be positive, got {v}")
        if self.omega is not None and not (math.isfinite(self.omega) and self.omega > 0):
            raise InvalidInput("omega must be positive")
        if not (0 <= self.alpha <= math.pi and 0 <= self.theta <= math.pi):
            raise InvalidInput("alpha and theta must lie in [0, pi]")
        if not (0 <= self.phi < 2 * math.pi):
            raise InvalidInput("phi must lie in [0, 2 pi)")
        if int(self.R) != self.R or self.R < 1:
            raise InvalidInput("R must be a positive integer")
        if int(self.l_max) != self.l_max or self.l_max < 0:
            raise InvalidInput("l_max must be a non-negative integer")
        if self.n_range is not None:
            lo, hi = self.n_range
            if int(lo) != lo or int(hi) != hi or lo > hi:
                raise InvalidInput(f"n_range must be an integer interval, got {self.n_range}")
            object.__setattr__(self, "n_range", (int(lo), int(hi)))
        if self.bessel_arg is not None and not (math.isfinite(self.bessel_arg) and self.bessel_arg >= 0):
            raise InvalidInput("bessel_arg must be >= 0")
        if self.k_value is not None and not (math.isfinite(self.k_value) and self.k_value >= 0):
            raise InvalidInput("k_value must be >= 0")
        object.__setattr__(self, "R", int(self.R))
        object.__setattr__(self, "l_max", int(self.l_max))

    @property
    def omega0(self) -> float:
        return 2 * math.pi * self.f0

    @property
    def w(self) -> float:
        """Analysis angular frequency omega = 2 pi f."""
        return self.omega0 if self.omega is None else self.omega

    @property
    def omega_r(self) -> float:
        """Earth rotation rate; the same quantity as omega_rot."""
        return 2 * math.pi / self.T_rE

    @property
    def omega_orb(self) -> float:
        return 2 * math.pi / self.T_orb

    @property
    def X(self) -> float:
        """Bessel argument 2 pi f0 A sin(theta) / c."""
        if self.bessel_arg is not None:
            return self.bessel_arg
        return 2 * math.pi * self.f0 * self.A * math.sin(self.theta) / self.c

    @property
    def k(self) -> float:
        """Doppler scale 4 pi f0 R_E sin(alpha) / c."""
        if self.k_value is not None:
            return self.k_value
        return 4 * math.pi * self.f0 * self.R_E * math.sin(self.alpha) / self.c

    def n_bounds(self) -> Tuple[int, int]:
        if self.n_range is not None:
            return self.n_range
        x = self.X
        top = int(math.ceil(x + 10 * x ** (1 / 3) + 20)) if x > 0 else 0
        return (-top, top)


@dataclass(frozen=True)
class SignalTerm:
    n: int
    l: int
    m: int
    psi0: complex
    psi1: complex
    psi2: complex
    psi3: float
    psi4: float
    product: complex


@dataclass
class SignalResult:
    total: complex
    terms: List[SignalTerm]
    tail_estimate: float
    shell_totals: List[complex]
    bessel_methods: Dict[int, Method] = field(default_factory=dict)

    def largest(self, count: int = 10) -> List[SignalTerm]:
        return sorted(self.terms, key=lambda t: abs(t.product), reverse=True)[:count]


def b_orb(params: GwParams, n, m):
    """B_orb = 2((omega - omega0)/omega_r + m/2 + n omega_orb/omega_r); n may be an array."""
    return 2.0 * ((params.w - params.omega0) / params.omega_r + m / 2.0 + n * params.omega_orb / params.omega_r)


def assoc_legendre(l: int, m: int, u: float) -> float:
    """Unnormalized P_l^m(u) with the Condon-Shortley phase, by upward recurrence in l from P_m^m."""
    if int(l) != l or int(m) != m or l < 0 or abs(m) > l:
        raise InvalidInput(f"need integers with |m| <= l, got l={l}, m={m}")
    if not -1.0 <= u <= 1.0:
        raise InvalidInput(f"u must lie in [-1, 1], got {u}")
    l, m = int(l), int(m)
    if m < 0:
        mm = -m
        ratio = math.exp(math.lgamma(l - mm + 1) - math.lgamma(l + mm + 1))
        return (-1) ** mm * ratio * assoc_legendre(l, mm, u)
    pmm = 1.0
    if m > 0:
        s = math.sqrt((1.0 - u) * (1.0 + u))
        fact = 1.0
        for _ in range(m):
            pmm *= -fact * s
            fact += 2.0
    if l == m:
        return pmm
    pm1 = u * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        pmm, pm1 = pm1, ((2 * ll - 1) * u * pm1 - (ll + m - 1) * pmm) / (ll - m)
    return pm1


def norm_lm(l: int, m: int) -> float:
    """N_lm = sqrt((2l+1)(l-m)! / (4 pi (l+m)!))."""
    return math.sqrt((2 * l + 1) / (4 * math.pi) * math.exp(math.lgamma(l - m + 1) - math.lgamma(l + m + 1)))


def spherical_harmonic(l: int, m: int, theta: float, phi: float) -> complex:
    """Orthonormal Y_lm(theta, phi) = N_lm P_l^m(cos theta) e^{i m phi}."""
    return norm_lm(l, m) * assoc_legendre(l, m, math.cos(theta)) * cmath.exp(1j * m * phi)


def psi0(params: GwParams, l: int, m: int) -> complex:
    """4 pi i^l Y_lm(theta, phi) N_lm P_l^m(cos alpha)."""
    return (4 * math.pi * 1j ** l * spherical_harmonic(l, m, params.theta, params.phi) * norm_lm(l, m)
            * assoc_legendre(l, m, math.cos(params.alpha)))


def _bessel_n(params: GwParams, n: int, policy: Optional[DispatchPolicy], precision: PrecisionConfig):
    r = eval_J(BesselQuery(abs(n), params.X, precision), policy)
    sign = -1.0 if (n < 0 and n % 2) else 1.0
    return sign * float(r.value), r.method


def psi1(params: GwParams, n: int, policy: Optional[DispatchPolicy] = None,
         precision: Optional[PrecisionConfig] = None) -> complex:
    """T_rE sqrt(pi/2) e^{-i X cos(phi)} i^n e^{-i n phi} J_n(X)."""
    jn, _ = _bessel_n(params, n, policy, precision or PrecisionConfig())
    return _psi1_from_j(params, n, jn)


def _psi1_from_j(params: GwParams, n: int, jn: float) -> complex:
    x = params.X
    phase = cmath.exp(-1j * x * math.cos(params.phi)) * 1j ** (n % 4) * cmath.exp(-1j * n * params.phi)
    return params.T_rE * math.sqrt(math.pi / 2) * phase * jn


def _geometric(d, R: int):
    """sum_{j<R} e^{i pi d j}; d may be an array. Exact R where d is an even integer."""
    d = np.asarray(d, dtype=float)
    # reduce d modulo 2 so the removable singularity is recognised exactly
    dr = np.mod(d, 2.0)
    singular = (dr == 0.0)
    num = 1.0 - np.exp(1j * np.pi * dr * R)
    den = 1.0 - np.exp(1j * np.pi * dr)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(singular, 0.0, num / np.where(singular, 1.0, den))
    # d odd: every pair of terms cancels exactly, leaving 1 when R is odd
    odd = (dr == 1.0)
    ratio = np.where(odd, float(R % 2), ratio)
    near = (~singular) & (~odd) & (np.abs(den) < 1e-4)
    if np.any(near):
        # direct summation where the ratio form loses digits
        j = np.arange(R)
        ratio = np.where(near, np.exp(1j * np.pi * np.outer(dr, j)).sum(axis=1).reshape(dr.shape), ratio)
    return np.where(singular, float(R), ratio)


def psi2(params: GwParams, l: int, n, m: int):
    """{sum_{j<R} e^{i pi (l - B) j}} e^{-i B pi/2} / 2^(2l), with B = B_orb(n, m)."""
    b = b_orb(params, n, m)
    out = _geometric(l - b, params.R) * np.exp(-0.5j * np.pi * b) / 4.0 ** l
    return complex(out) if np.ndim(out) == 0 else out


def _rgamma_log(a):
    """(sign, log|1/Gamma(a)|) with sign 0 at the poles a = 0, -1, -2, ..."""
    a = np.asarray(a, dtype=float)
    pole = (a <= 0) & (a == np.floor(a))
    sign = np.where(pole, 0.0, special.gammasgn(np.where(pole, 0.5, a)))
    logv = np.where(pole, 0.0, -special.gammaln(np.where(pole, 0.5, a)))
    return sign, logv


def psi3(params: GwParams, l: int, n, m: int):
    """k^(l+1/2) Gamma(l+1) / (Gamma(l+3/2) Gamma((l+B+2)/2) Gamma((l-B+2)/2)), formed in log space."""
    b = b_orb(params, n, m)
    k = params.k
    s1, g1 = _rgamma_log((l + b + 2) / 2.0)
    s2, g2 = _rgamma_log((l - b + 2) / 2.0)
    if k == 0.0:
        out = np.zeros_like(np.asarray(b, dtype=float))
    else:
        base = (l + 0.5) * math.log(k) + math.lgamma(l + 1) - math.lgamma(l + 1.5)
        out = s1 * s2 * np.exp(base + g1 + g2)
    return float(out) if np.ndim(out) == 0 else out


def _check_poles(bs) -> None:
    for b in bs:
        if b <= 0 and b == math.floor(b):
            raise PoleInParameters(f"lower parameter {b} is a non-positive integer")


def _hyp_working_digits(x: float, target_rel_error: float) -> int:
    target = int(math.ceil(-math.log10(target_rel_error)))
    return target + int(math.ceil(0.9 * math.sqrt(abs(x)) * 2)) + 5


def hypergeom_1F3(a: float, b1: float, b2: float, b3: float, x: float, target_rel_error: float = 1e-15) -> float:
    """1F3(a; b1, b2, b3; x) = sum_k (a)_k / ((b1)_k (b2)_k (b3)_k) x^k / k!.

    Non-negative x is summed in double precision. Negative x alternates, so it is
    summed with mpmath at target + ceil(1.8 sqrt|x|) guard digits, except when
    that guard is under three digits and double precision still suffices.
    """
    _check_poles((b1, b2, b3))
    if not math.isfinite(x):
        raise InvalidInput("x must be finite")
    if abs(x) > HYP_CAP:
        raise CapExceeded(f"|x| = {abs(x):.4g} exceeds {HYP_CAP:g}; choose a desk-scale parameter set")
    if x == 0.0:
        return 1.0
    if x > 0 or 0.9 * math.sqrt(-x) * 2 < 3:
        return float(_hyp_series_float(a, (b1, b2, b3), np.asarray(x)))
    ctx = mp_context(_hyp_working_digits(x, target_rel_error), "hyp")
    return float(ctx.hyper([a], [b1, b2, b3], x))


def _hyp_series_float(a, bs, x, tol: float = 1e-17):
    """Vectorized 1F3 in double precision; the b's may be arrays broadcasting with x."""
    b1, b2, b3 = (np.asarray(b, dtype=float) for b in bs)
    x = np.asarray(x, dtype=float)
    term = np.ones(np.broadcast(b1, b2, b3, x).shape)
    total = term.copy()
    k = 0
    while True:
        term = term * (a + k) * x / ((b1 + k) * (b2 + k) * (b3 + k) * (k + 1))
        total = total + term
        k += 1
        if np.all(np.abs(term) <= tol * np.maximum(np.abs(total), 1e-300)) or k > 2000:
            return total


def psi4(params: GwParams, l: int, n, m: int):
    """1F3(l+1; l+3/2, (l+B+2)/2, (l-B+2)/2; -k^2/16); zero where psi3 sits on a Gamma pole."""
    b = np.asarray(b_orb(params, n, m), dtype=float)
    x = -params.k ** 2 / 16.0
    b2 = (l + b + 2) / 2.0
    b3 = (l - b + 2) / 2.0
    pole = ((b2 <= 0) & (b2 == np.floor(b2))) | ((b3 <= 0) & (b3 == np.floor(b3)))
    if x == 0.0:
        out = np.where(pole, 0.0, 1.0)
    elif 0.9 * math.sqrt(-x) * 2 < 3:
        safe2 = np.where(pole, 0.5, b2)
        safe3 = np.where(pole, 0.5, b3)
        out = np.where(pole, 0.0, _hyp_series_float(l + 1.0, (l + 1.5, safe2, safe3), x))
    else:
        flat = [0.0 if p else hypergeom_1F3(l + 1.0, l + 1.5, c2, c3, x)
                for p, c2, c3 in zip(np.ravel(pole), np.ravel(b2), np.ravel(b3))]
        out = np.reshape(np.array(flat), b.shape)
    return float(out) if np.ndim(out) == 0 else out


def ft_signal(params: GwParams, policy: Optional[DispatchPolicy] = None,
              precision: Optional[PrecisionConfig] = None, keep_terms: bool = True) -> SignalResult:
    """Truncated triple sum over n in n_bounds(), 0 <= l <= l_max, |m| <= l.

    The tail estimate is |l = l_max shell| / |total|; a :class:`TruncationWarning`
    is raised when it exceeds 1e-6.
    """
    precision = precision or PrecisionConfig()
    lo, hi = params.n_bounds()
    ns = np.arange(lo, hi + 1)
    jn = {}
    methods: Dict[int, Method] = {}
    for n in range(0, max(abs(lo), abs(hi)) + 1):
        if lo <= n <= hi or lo <= -n <= hi:
            val, meth = _bessel_n(params, n, policy, precision)
            jn[n] = val
            methods[n] = meth
    p1 = np.array([_psi1_from_j(params, int(n), (-1.0 if (n < 0 and n % 2) else 1.0) * jn[abs(int(n))])
                   for n in ns])
    terms: List[SignalTerm] = []
    re_parts: List[float] = []
    im_parts: List[float] = []
    shells: List[complex] = []
    for l in range(params.l_max + 1):
        shell_re: List[float] = []
        shell_im: List[float] = []
        for m in range(-l, l + 1):
            p0 = psi0(params, l, m)
            p2 = psi2(params, l, ns, m)
            p3 = psi3(params, l, ns, m)
            p4 = psi4(params, l, ns, m)
            prod = p0 * p1 * p2 * p3 * p4
            shell_re.extend(prod.real.tolist())
            shell_im.extend(prod.imag.tolist())
            if keep_terms:
                for i, n in enumerate(ns.tolist()):
                    terms.append(SignalTerm(n, l, m, p0, complex(p1[i]), complex(p2[i]), float(p3[i]),
                                            float(p4[i]), complex(prod[i])))
        shells.append(complex(math.fsum(shell_re), math.fsum(shell_im)))
        re_parts.extend(shell_re)
        im_parts.extend(shell_im)
    total = complex(math.fsum(re_parts), math.fsum(im_parts))
    tail = abs(shells[-1]) / abs(total) if abs(total) > 0 else (0.0 if abs(shells[-1]) == 0 else math.inf)
    if tail > 1e-6:
        warnings.warn(f"last l-shell carries {tail:.2e} of the total; raise l_max", TruncationWarning, stacklevel=2)
    if keep_terms:
        terms.sort(key=lambda t: (t.n, t.l, t.m))
    return SignalResult(total, terms, tail, shells, methods)


def _desk() -> GwParams:
    return GwParams(f0=1.0, alpha=math.pi / 4, theta=math.pi / 3, phi=1.0, R=7, l_max=12,
                    bessel_arg=300.0, k_value=3.0)


#: named parameter sets: a desk-scale one (X = 300, k = 3) whose every factor is
#: oracle-checkable, the same with theta = 0, and the physical f0 = 1000 Hz case
PRESETS = {
    "desk": _desk,
    "theta0": lambda: replace(_desk(), theta=0.0, bessel_arg=0.0),
    "physical": lambda: GwParams(f0=1000.0, alpha=math.pi / 4, theta=math.pi / 2, phi=1.0, R=7,
                                 n_range=(-3, 3), l_max=2),
}


def preset(name: str) -> GwParams:
    try:
        return PRESETS[name]()
    except KeyError:
        raise InvalidInput(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
        ast.Pow: operator.pow}


def _number(text: str) -> float:
    """Parse a number that may use pi, e.g. "pi/3" or "2*pi/365"."""
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(text)

    try:
        return ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise InvalidInput(f"cannot parse number {text!r}") from None


_INT_KEYS = {"R", "l_max"}


def parse_params(lines: Iterable[str]) -> GwParams:
    """Build GwParams from ``key = value`` lines. ``preset = desk`` starts from a preset;
    ``n_range = -50:50`` sets the n interval. Blank lines and '#' comments are ignored."""
    items: Dict[str, str] = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidInput(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        items[key] = value
    base = preset(items.pop("preset")) if "preset" in items else GwParams()
    fields = {f for f in GwParams.__dataclass_fields__}
    kw = {}
    for key, value in items.items():
        if key not in fields:
            raise InvalidInput(f"unknown parameter {key!r}")
        if key == "n_range":
            try:
                lo, hi = (int(v) for v in value.split(":"))
            except ValueError:
                raise InvalidInput(f"n_range must look like -50:50, got {value!r}") from None
            kw[key] = (lo, hi)
        elif key in _INT_KEYS:
            v = _number(value)
            if v != int(v):
                raise InvalidInput(f"{key} must be an integer")
            kw[key] = int(v)
        else:
            kw[key] = _number(value)
    return replace(base, **kw)


def load_params(path: str) -> GwParams:
    with open(path, encoding="utf-8") as fh:
        return parse_params(fh)


def write_terms_csv(result: SignalResult, fh) -> None:
    """One row per (n, l, m) with real and imaginary parts of every factor and the product."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "l", "m", "psi0_re", "psi0_im", "psi1_re", "psi1_im", "psi2_re", "psi2_im",
                "psi3", "psi4", "product_re", "product_im"])
    for t in result.terms:
        w.writerow([t.n, t.l, t.m, repr(t.psi0.real), repr(t.psi0.imag), repr(t.psi1.real), repr(t.psi1.imag),
                    repr(t.psi2.real), repr(t.psi2.imag), repr(t.psi3), repr(t.psi4),
                    repr(t.product.real), repr(t.product.imag)])

