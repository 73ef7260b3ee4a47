import math

import numpy as np
import pytest

from gwbessel.core import BesselQuery, InvalidInput, OutOfRange, OutOfValidity, WrongRegime
from gwbessel.meissel import meissel_third
from gwbessel.transition import (EPSILON_B, WATSON_ABOVE_MAX_W, WatsonBound, epsilon_expansion, watson_above,
                                 watson_below)
from refvalues import J, rel_err


def eps(nu, x, **kw):
    return epsilon_expansion(BesselQuery(nu, x), **kw)


@pytest.mark.parametrize("x,tol", [(295, 1e-9), (305, 1e-9)])
def test_epsilon_against_reference(x, tol):
    assert rel_err(eps(300, x).value, 300, x) < tol


def test_epsilon_at_transition_point_reproduces_third_expansion():
    assert math.isclose(eps(300, 300).value, meissel_third(300).value, rel_tol=1e-14)
    assert rel_err(eps(1000, 1000).value, 1000, 1000) < 1e-15


def test_epsilon_zero_sine_terms():
    assert [m for m, b in EPSILON_B.items() if b is None] == [2, 5, 8, 11, 14]
    junk = dict(EPSILON_B)
    for m in (2, 5, 8, 11, 14):
        junk[m] = (1e6, -3e5, 7e4)
    for x in (296.0, 300.0, 303.5):
        assert eps(300, x, table=junk).value == eps(300, x).value


def test_epsilon_leading_coefficients():
    assert EPSILON_B[0] == (1,)
    assert EPSILON_B[1] == (0, 1)
    for m, b in EPSILON_B.items():
        if b is not None:
            assert len(b) == m + 1
            assert b[m] * math.factorial(m) == 1  # B_m(w) = w^m / m! + lower order


def test_epsilon_validity_radius():
    nu = 300
    edge = 1.6 * float(np.cbrt(nu))
    eps(nu, nu + 0.99 * edge)
    with pytest.raises(OutOfValidity):
        eps(nu, nu + 1.01 * edge)
    eps(nu, nu + 1.01 * edge, validity_radius=2.0)
    with pytest.raises(InvalidInput):
        eps(nu, 300, m_max=16)


def test_watson_bound_values():
    b = WatsonBound(300)
    assert b.above() == pytest.approx(0.08)
    xs = np.linspace(250, 299.9, 20)
    vals = [b.below(float(x)) for x in xs]
    assert all(v <= 3 / 300 * (1 + 1e-12) for v in vals)
    assert all(np.diff(vals) > 0)


@pytest.mark.parametrize("nu", [100, 300])
def test_watson_below_within_bound(nu, oracle):
    for x in nu - np.array([0.5, 2.0, 4.0]) * nu ** (1 / 3):
        r = watson_below(BesselQuery(nu, float(x)))
        assert r.rigorous
        assert abs(r.value - oracle(nu, float(x))) <= r.est_error


@pytest.mark.parametrize("nu", [100, 300])
def test_watson_above_within_bound(nu, oracle):
    for x in nu + np.array([0.5, 2.0, 4.0]) * nu ** (1 / 3):
        r = watson_above(BesselQuery(nu, float(x)))
        assert r.rigorous
        assert abs(r.value - oracle(nu, float(x))) <= r.est_error


def test_watson_close_to_transition_point():
    third = meissel_third(300).value
    assert abs(watson_above(BesselQuery(300, 300.0001)).value - third) < 1e-4
    assert abs(watson_below(BesselQuery(300, 299.9999)).value - third) < 1e-4
    assert abs(watson_below(BesselQuery(300, 295)).value - J[(300, 295)]) < 1e-4


def test_watson_domains():
    with pytest.raises(WrongRegime):
        watson_below(BesselQuery(300, 300))
    with pytest.raises(WrongRegime):
        watson_above(BesselQuery(300, 300))
    t = (3 * WATSON_ABOVE_MAX_W / 300) ** (1 / 3) * 1.01
    with pytest.raises(OutOfRange):
        watson_above(BesselQuery(300, 300 * math.sqrt(1 + t * t)))
