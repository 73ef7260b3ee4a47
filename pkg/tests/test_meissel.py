import math
from fractions import Fraction

import numpy as np
import pytest

from gwbessel.core import BesselQuery, InvalidInput, Method, PrecisionLossWarning, WrongRegime
from gwbessel.meissel import (THIRD_LAMBDA, meissel_first, meissel_first_terms, meissel_second,
                              meissel_second_terms, meissel_third)
from refvalues import J, rel_err


def first(nu, x, k=None):
    return meissel_first(BesselQuery(nu, x), k)


def second(nu, x, k=None):
    return meissel_second(BesselQuery(nu, x), k)


@pytest.mark.parametrize("x,tol", [(150, 1e-12), (250, 1e-10)])
def test_first_against_reference(x, tol):
    r = first(300, x)
    assert r.method is Method.MEISSEL_FIRST and r.terms_used == 8
    assert rel_err(r.value, 300, x) < tol
    assert not r.precision_loss


def test_first_converges_with_terms():
    errs = [rel_err(first(300, 250, k).value, 300, 250) for k in (0, 2, 4, 6, 8)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_first_tiny_argument(oracle):
    # at order 10 the flagged band covers every z, yet the value is still accurate
    with pytest.warns(PrecisionLossWarning):
        r = first(10, 1e-3)
    assert abs(r.value / oracle(10, 1e-3) - 1) < 1e-12
    big = first(1e4, 9000)
    assert math.isfinite(big.value) and big.value > 0


def test_first_term_signs_from_fifth_on():
    # flipping V5..V8 (the sign convention of the common printed table) is much worse
    nu, x = 300, 250
    V = meissel_first_terms(x / nu, nu)
    good = first(nu, x).value
    flipped = good * math.exp(2.0 * math.fsum(V[4:8]))
    assert rel_err(flipped, nu, x) > 100 * rel_err(good, nu, x)


@pytest.mark.parametrize("z", [0.3, 0.6, 0.9])
def test_first_terms_scale_with_order(z):
    a = meissel_first_terms(z, 50.0)
    b = meissel_first_terms(z, 100.0)
    for k, (va, vb) in enumerate(zip(a, b), start=1):
        assert math.isclose(vb, va / 2 ** k, rel_tol=1e-12)


def test_first_satisfies_bessel_ode():
    # z^2 y'' + z y' + nu^2 (z^2 - 1) y = 0 for y(z) = J_nu(nu z); checked on log y
    nu, z0, h = 300.0, 0.6, 1e-3
    L = [math.log(first(nu, nu * (z0 + k * h)).value) for k in (-1, 0, 1)]
    d1 = (L[2] - L[0]) / (2 * h)
    d2 = (L[2] - 2 * L[1] + L[0]) / h ** 2
    scale = nu ** 2
    good = z0 ** 2 * (d2 + d1 ** 2) + z0 * d1 + nu ** 2 * (z0 ** 2 - 1)
    printed = z0 ** 2 * (d2 + d1 ** 2) + z0 * d1 + nu ** 2 * (1 - z0 ** 2)
    assert abs(good) / scale < 1e-5
    assert abs(printed) / scale > 1.0


def test_first_domain():
    with pytest.raises(WrongRegime):
        first(300, 300)
    with pytest.raises(InvalidInput):
        first(300, 200, 9)
    with pytest.warns(PrecisionLossWarning):
        r = first(300, 299.5)
    assert r.precision_loss


@pytest.mark.parametrize("x,tol", [(320, 1e-6), (400, 1e-12)])
@pytest.mark.filterwarnings("ignore::gwbessel.core.PrecisionLossWarning")
def test_second_against_reference(x, tol):
    r = second(300, x)
    assert abs(r.value - J[(300, x)]) < tol
    assert r.est_error < 10 * tol


def test_second_fourth_term_signs():
    # with P_4, Q_4 flipped to the commonly printed sign the error grows tenfold
    nu, x = 300, 320
    terms = meissel_second_terms(nu, x)
    c = 1 / math.sqrt((x / nu) ** 2 - 1)
    amp = math.sqrt(2 * c / (nu * math.pi))

    def value(sign):
        psum = sum(terms.p[:3]) + sign * terms.p[3]
        qsum = sum(terms.q[:3]) + sign * terms.q[3]
        return amp * math.exp(-psum) * math.cos(qsum - math.pi / 4)

    with pytest.warns(PrecisionLossWarning):
        ref = second(nu, x).value
    assert math.isclose(value(1), ref, rel_tol=1e-9)
    good = abs(value(1) - J[(nu, x)])
    bad = abs(value(-1) - J[(nu, x)])
    assert bad > 5 * good


def test_second_phase_lead():
    nu, x = 300.0, 400.0
    t = math.sqrt((x / nu) ** 2 - 1)
    assert math.isclose(meissel_second_terms(nu, x).lead, nu * (t - math.atan(t)), rel_tol=1e-15)


def test_second_huge_argument(oracle):
    import scipy.special as sc
    r = second(1e6, 1.5e6)
    assert abs(r.value - sc.jv(1e6, 1.5e6)) < 1e-11
    assert abs(second(1, 1000).value - J[(1, 1000)]) < 1e-12


def test_second_band_flag():
    with pytest.warns(PrecisionLossWarning):
        r = second(300, 300.2)
    assert r.precision_loss
    with pytest.raises(WrongRegime):
        second(300, 250)


def _reversion_coefficients(n_terms):
    """theta(s) solving theta - sin(theta) = s^3 / 6, as odd coefficients a_1, a_3, ..."""
    deg = 2 * n_terms + 3

    def mul(a, b):
        out = [Fraction(0)] * (deg + 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b[:deg + 1 - i]):
                    out[i + j] += ai * bj
        return out

    def lhs(theta):
        # theta - sin(theta) = sum_k (-1)^k theta^(2k+3) / (2k+3)!
        out = [Fraction(0)] * (deg + 1)
        p = mul(mul(theta, theta), theta)
        sq = mul(theta, theta)
        k = 0
        while any(p):
            c = Fraction((-1) ** k, math.factorial(2 * k + 3))
            out = [o + c * q for o, q in zip(out, p)]
            p = mul(p, sq)
            k += 1
        return out

    theta = [Fraction(0)] * (deg + 1)
    theta[1] = Fraction(1)
    for k in range(1, n_terms):
        d = 2 * k + 1
        theta[d] = -2 * lhs(theta)[d + 2]
    return [theta[2 * k + 1] for k in range(n_terms)]


def test_third_coefficients_from_reversion():
    assert list(THIRD_LAMBDA) == _reversion_coefficients(8)
    # the commonly printed lambda_6 and lambda_7 are not the reversion values
    assert THIRD_LAMBDA[6] != Fraction(681563, 5721073600000)
    assert THIRD_LAMBDA[7] != Fraction(63319, 726485760000000)


@pytest.mark.parametrize("n,tol", [(300, 1e-15), (1000, 1e-15), (100, 1e-13)])
def test_third_against_reference(n, tol):
    assert rel_err(meissel_third(n).value, n, n) < tol


def test_third_skips_vanishing_terms():
    r = meissel_third(300)
    assert r.terms_used == 5  # m = 1, 4, 7 carry cos(pi/2 + k pi) = 0
    assert meissel_third(300, 1).terms_used == 1
    assert meissel_third(300, 1).value == meissel_third(300, 0).value
    assert meissel_third(300, 7).value == meissel_third(300, 6).value


def test_third_leading_term():
    n = 1e8
    lead = math.gamma(1 / 3) / (2 ** (2 / 3) * 3 ** (1 / 6) * math.pi * n ** (1 / 3))
    assert math.isclose(meissel_third(n).value, lead, rel_tol=1e-5)
    with pytest.raises(InvalidInput):
        meissel_third(0)
    with pytest.raises(InvalidInput):
        meissel_third(10, 8)


def test_first_array_of_points_matches_scalar_calls():
    xs = np.linspace(100, 250, 7)
    vals = [first(300, float(x)).value for x in xs]
    assert np.all(np.diff(vals) > 0)
