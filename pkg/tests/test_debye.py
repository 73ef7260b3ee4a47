import math
from fractions import Fraction

import pytest
import scipy.special as sc

from gwbessel.core import BesselQuery, InvalidInput, PrecisionLossWarning, WrongRegime
from gwbessel.debye import A_ABOVE, A_BELOW, debye_above, debye_below
from gwbessel.meissel import meissel_second
from refvalues import J, rel_err


def _debye_u(n):
    """Debye's u_k(p) as ascending coefficient lists in p, via the standard recurrence
    u_{k+1} = p^2 (1 - p^2) u_k' / 2 + (1/8) int_0^p (1 - 5 t^2) u_k dt."""
    polys = [[Fraction(1)]]
    for _ in range(n):
        u = polys[-1]
        out = [Fraction(0)] * (len(u) + 3)
        for j, c in enumerate(u):
            if j:
                out[j + 1] += Fraction(1, 2) * j * c
                out[j + 3] -= Fraction(1, 2) * j * c
            out[j + 1] += c / 8 / (j + 1)
            out[j + 3] -= 5 * c / 8 / (j + 3)
        while out and out[-1] == 0:
            out.pop()
        polys.append(out)
    return polys


def test_below_coefficients_match_debye_polynomials():
    # u_m(p) = (2m-1)!! p^m A_m(p^2)
    for m, u in enumerate(_debye_u(4)):
        g = math.prod(range(1, 2 * m, 2))
        expect = [Fraction(0)] * len(u)
        for j, a in enumerate(A_BELOW[m]):
            expect[m + 2 * j] = g * a
        assert u == expect, m


def test_above_coefficients_are_magnitudes():
    for below, above in zip(A_BELOW, A_ABOVE):
        assert all(a == abs(b) and a > 0 for a, b in zip(above, below))
    assert A_BELOW[4][0] == Fraction(35, 32768)


@pytest.mark.parametrize("x,tol", [(150, 1e-11), (250, 1e-7)])
def test_below_against_reference(x, tol):
    r = debye_below(BesselQuery(300, x))
    assert rel_err(r.value, 300, x) < tol
    assert abs(r.value - J[(300, x)]) <= r.est_error


def test_below_improves_with_terms():
    errs = [rel_err(debye_below(BesselQuery(300, 250), m).value, 300, 250) for m in range(5)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_above_against_reference():
    r = debye_above(BesselQuery(300, 400))
    assert abs(r.value - (-0.048457238015631149095533875872747)) < 1e-9
    assert r.est_error < 1e-8
    assert not r.precision_loss


def test_above_matches_second_expansion_at_large_order():
    for x in (1.2e6, 1.5e6, 2e7):
        q = BesselQuery(1e6, x)
        assert abs(debye_above(q).value - meissel_second(q).value) < 1e-14
    assert abs(debye_above(BesselQuery(1e6, 1.5e6)).value - sc.jv(1e6, 1.5e6)) < 1e-11


def test_domain_checks():
    with pytest.raises(WrongRegime):
        debye_below(BesselQuery(300, 300))
    with pytest.raises(WrongRegime):
        debye_above(BesselQuery(300, 300))
    with pytest.raises(InvalidInput):
        debye_below(BesselQuery(300, 100), 5)
    with pytest.warns(PrecisionLossWarning):
        assert debye_above(BesselQuery(300, 310)).precision_loss


def _printed_debye_above(nu, x):
    """The above-transition form with tanh(beta) in the denominators and beta/4 in the phase."""
    beta = math.acos(nu / x)
    th = math.tanh(beta)
    u = 1 / math.tan(beta) ** 2
    h = 0.5 * nu * th
    cos_s = sin_s = 0.0
    for m, poly in enumerate(A_ABOVE):
        term = math.prod(range(1, 2 * m, 2)) / 2 ** m * float(sum(c * u ** j for j, c in enumerate(poly))) / h ** m
        sign = -1 if (m // 2) % 2 else 1
        if m % 2 == 0:
            cos_s += sign * term
        else:
            sin_s += sign * term
    phase = nu * (math.tan(beta) - beta) - beta / 4
    return math.sqrt(2 / (math.pi * nu * th)) * (math.cos(phase) * cos_s + math.sin(phase) * sin_s)


def test_printed_above_form_fails_where_corrected_form_passes():
    ref = -0.048457238015631149095533875872747
    corrected = abs(debye_above(BesselQuery(300, 400)).value - ref)
    printed = abs(_printed_debye_above(300, 400) - ref)
    assert corrected < 1e-10
    assert printed > 1e-3
