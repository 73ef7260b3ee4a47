import cmath
import io
import math
from dataclasses import replace

import mpmath
import numpy as np
import pytest
import scipy.special as sc

from gwbessel.core import CapExceeded, InvalidInput, Method, PoleInParameters, TruncationWarning
from gwbessel.gw_signal import (GwParams, _geometric, assoc_legendre, b_orb, ft_signal, hypergeom_1F3,
                                parse_params, preset, psi1, psi2, psi3, psi4, spherical_harmonic,
                                write_terms_csv)


def brute_1F3(a, b1, b2, b3, x, dps=200):
    """Term-by-term sum in 200-digit arithmetic, stopping once terms are negligible."""
    with mpmath.workdps(dps):
        a, b1, b2, b3, x = (mpmath.mpf(v) for v in (a, b1, b2, b3, x))
        term = mpmath.mpf(1)
        total = term
        k = 0
        while True:
            term *= (a + k) * x / ((b1 + k) * (b2 + k) * (b3 + k) * (k + 1))
            total += term
            k += 1
            if k > 10 and abs(term) < mpmath.mpf(10) ** (-dps + 5) * max(abs(total), 1):
                return float(total)


@pytest.mark.parametrize("args", [
    (3.0, 3.5, 2.25, 1.75, -0.5625),
    (1.0, 1.5, 1.0, 1.0, 5.0),
    (5.0, 5.5, 4.0, 3.0, -100.0),
    (13.0, 13.5, 9.1, 6.9, -2500.0),
    (2.0, 2.5, -0.5, 3.5, -9.0),
])
def test_hypergeometric_against_brute_force(args):
    ref = brute_1F3(*args)
    assert hypergeom_1F3(*args) == pytest.approx(ref, rel=1e-13, abs=1e-300)


def test_hypergeometric_guards():
    assert hypergeom_1F3(1, 2, 3, 4, 0.0) == 1.0
    with pytest.raises(PoleInParameters):
        hypergeom_1F3(1, 2, -3.0, 4, 1.0)
    with pytest.raises(CapExceeded):
        hypergeom_1F3(1, 2, 3, 4, -2e4)
    with pytest.raises(InvalidInput):
        hypergeom_1F3(1, 2, 3, 4, math.nan)


@pytest.mark.parametrize("l,m", [(0, 0), (3, 2), (7, -4), (12, 12), (20, 5)])
def test_legendre_matches_scipy(l, m):
    for u in (-0.9, -0.3, 0.0, 0.4, 0.95):
        assert assoc_legendre(l, m, u) == pytest.approx(sc.lpmv(m, l, u), rel=1e-12, abs=1e-14)


def test_spherical_harmonic_orthonormal():
    # Gauss-Legendre in cos(theta), trapezoid (exact for trig polynomials) in phi
    u, wu = np.polynomial.legendre.leggauss(40)
    phis = np.linspace(0, 2 * np.pi, 32, endpoint=False)
    theta = np.arccos(u)

    def inner(a, b):
        tot = 0
        for th, w in zip(theta, wu):
            for ph in phis:
                tot += w * spherical_harmonic(*a, th, ph) * spherical_harmonic(*b, th, ph).conjugate()
        return tot * 2 * np.pi / len(phis)

    assert abs(inner((2, 2), (2, 2)) - 1) < 1e-12
    assert abs(inner((2, 2), (2, 1))) < 1e-12
    assert abs(inner((2, 2), (4, 2))) < 1e-12
    assert abs(inner((3, -1), (3, -1)) - 1) < 1e-12


def test_spherical_harmonic_conjugation():
    for l, m in ((2, 1), (5, 3), (8, 8)):
        th, ph = 0.7, 2.1
        lhs = spherical_harmonic(l, -m, th, ph)
        rhs = (-1) ** m * spherical_harmonic(l, m, th, ph).conjugate()
        assert cmath.isclose(lhs, rhs, rel_tol=1e-12, abs_tol=1e-15)
    assert spherical_harmonic(2, 2, 0.7, 2.1) == pytest.approx(sc.sph_harm_y(2, 2, 0.7, 2.1), rel=1e-12)


def test_geometric_sum():
    R = 7
    rng = np.random.default_rng(1)
    for d in rng.uniform(-5, 5, 20):
        brute = sum(cmath.exp(1j * math.pi * d * j) for j in range(R))
        assert cmath.isclose(complex(_geometric(d, R)), brute, rel_tol=1e-12, abs_tol=1e-12)
    assert complex(_geometric(4.0, R)) == R
    assert complex(_geometric(-2.0, R)) == R
    near = complex(_geometric(2.0 + 1e-9, R))
    assert abs(near - R) < 1e-6
    arr = _geometric(np.array([1.0, 2.0, 2.5]), R)
    assert arr[1] == R and arr.shape == (3,)


def test_psi2_singular_limit():
    p = preset("desk")
    # n = 0, m = l gives B = m, so l - B = 0 and every term of the geometric sum is 1
    for l in (0, 2, 5):
        b = b_orb(p, 0, l)
        assert b == l
        expect = p.R * cmath.exp(-0.5j * math.pi * b) / 4 ** l
        assert cmath.isclose(psi2(p, l, 0, l), expect, rel_tol=1e-14)
    vec = psi2(p, 3, np.arange(-3, 4), 1)
    assert all(cmath.isclose(vec[i], psi2(p, 3, n, 1), rel_tol=1e-14) for i, n in enumerate(range(-3, 4)))


def test_psi1_reflection():
    p = preset("desk")
    for n in (1, 2, 7, 40):
        ratio = psi1(p, -n) / psi1(p, n)
        assert cmath.isclose(ratio, cmath.exp(2j * n * p.phi), rel_tol=1e-12)


def test_psi3_and_psi4_vanish_on_gamma_poles():
    p = replace(preset("desk"), T_orb=2 * 86400.0)  # B = m + n, integer for every n
    for n in range(-6, 7):
        b = b_orb(p, n, 0)
        assert b == n
        on_pole = ((2 + b + 2) / 2 <= 0 and (2 + b + 2) % 2 == 0) or ((2 - b + 2) / 2 <= 0 and (2 - b + 2) % 2 == 0)
        if on_pole:
            assert psi3(p, 2, n, 0) == 0.0
            assert psi4(p, 2, n, 0) == 0.0
        else:
            assert psi3(p, 2, n, 0) != 0.0


def test_psi3_against_direct_gammas():
    p = preset("desk")
    l, n, m = 3, 5, 1
    b = b_orb(p, n, m)
    k = p.k
    direct = k ** (l + 0.5) * math.gamma(l + 1) / (math.gamma(l + 1.5) * math.gamma((l + b + 2) / 2)
                                                   * math.gamma((l - b + 2) / 2))
    assert psi3(p, l, n, m) == pytest.approx(direct, rel=1e-12)
    assert psi4(p, l, n, m) == pytest.approx(brute_1F3(l + 1, l + 1.5, (l + b + 2) / 2, (l - b + 2) / 2,
                                                       -k ** 2 / 16), rel=1e-13)


def test_small_signal_sum_structure():
    p = replace(preset("desk"), l_max=3, n_range=(-4, 4))
    with pytest.warns(TruncationWarning):
        r = ft_signal(p)
    assert len(r.terms) == 9 * 16
    assert cmath.isclose(sum(t.product for t in r.terms), r.total, rel_tol=1e-12)
    assert cmath.isclose(sum(r.shell_totals), r.total, rel_tol=1e-12)
    big = r.largest(3)
    assert abs(big[0].product) >= abs(big[1].product) >= abs(big[2].product)
    buf = io.StringIO()
    write_terms_csv(r, buf)
    rows = buf.getvalue().splitlines()
    assert len(rows) == 1 + len(r.terms)
    assert rows[0].startswith("n,l,m,psi0_re")


def test_theta_zero_keeps_only_n_zero():
    p = replace(preset("theta0"), l_max=4)
    with pytest.warns(TruncationWarning):
        r = ft_signal(p, keep_terms=True)
    assert p.X == 0.0 and p.n_bounds() == (0, 0)
    assert {t.n for t in r.terms} == {0}


def test_physical_parameters_run_on_asymptotics():
    p = preset("physical")
    assert p.X > 3e6
    with pytest.warns(TruncationWarning):
        r = ft_signal(p)
    assert math.isfinite(r.total.real) and math.isfinite(r.total.imag)
    assert set(r.bessel_methods.values()) <= {Method.MEISSEL_SECOND, Method.DEBYE_ABOVE}


def test_default_parameters():
    p = GwParams()
    assert p.X == pytest.approx(2 * math.pi * 1000 * 1.5e11 * math.sin(math.pi / 3) / 299792458.0)
    assert p.k == pytest.approx(4 * math.pi * 1000 * 6.371e6 * math.sin(math.pi / 4) / 299792458.0)
    assert p.w == p.omega0
    lo, hi = preset("desk").n_bounds()
    assert lo == -hi and hi > 300


def test_parse_params():
    p = parse_params(["preset = desk  # start here", "", "theta = pi/4", "n_range = -10:12", "l_max = 6",
                      "T_orb = 365*86400"])
    assert p.theta == math.pi / 4 and p.n_range == (-10, 12) and p.l_max == 6
    assert p.bessel_arg == 300.0
    for bad in (["theta = __import__('os')"], ["nonsense = 1"], ["l_max = 2.5"], ["n_range = 3"],
                ["just words"], ["preset = moon"]):
        with pytest.raises(InvalidInput):
            parse_params(bad)


def test_b_orb_examples():
    p = GwParams()
    assert b_orb(p, 0, 0) == 0.0
    assert b_orb(p, 0, 3) == 3.0
    shifted = replace(p, omega=p.omega0 + p.omega_r)
    # omega0 + omega_r - omega0 keeps only about eight digits of omega_r
    assert b_orb(shifted, 0, 0) == pytest.approx(2.0, rel=1e-8)


def test_factor_examples():
    from gwbessel.gw_signal import psi0
    p = preset("desk")
    assert psi0(p, 0, 0) == pytest.approx(1.0, rel=1e-15)
    flat = replace(preset("theta0"), phi=0.0)
    assert psi1(flat, 0) == pytest.approx(flat.T_rE * math.sqrt(math.pi / 2), rel=1e-15)
    assert psi1(flat, 3) == 0
    nu_n = 300
    assert abs(psi1(p, nu_n)) == pytest.approx(p.T_rE * math.sqrt(math.pi / 2) * 0.06681839812897988692, rel=1e-10)
    assert psi4(replace(p, k_value=0.0), 2, 3, 1) == 1.0
    assert psi3(replace(p, k_value=0.0), 2, 3, 1) == 0.0


def test_geometric_sum_examples():
    assert complex(_geometric(1.0, 2)) == 0.0
    assert complex(_geometric(3.0, 5)) == 1.0
    ratio = (1 - cmath.exp(1j * math.pi * 0.5 * 3)) / (1 - cmath.exp(1j * math.pi * 0.5))
    assert cmath.isclose(complex(_geometric(0.5, 3)), ratio, rel_tol=1e-12)
    for d in (2 + 1e-6, 2 - 1e-6, -4 + 1e-6):
        brute = sum(cmath.exp(1j * math.pi * d * j) for j in range(7))
        assert abs(complex(_geometric(d, 7)) - brute) < 1e-10


def test_hypergeometric_examples():
    direct = sum(2.0 ** k / math.factorial(k) ** 3 for k in range(50))
    assert hypergeom_1F3(1, 1, 1, 1, 2.0) == pytest.approx(direct, rel=1e-15)
    l, b = 2, 0.4
    args = (l + 1, l + 1.5, (l + b + 2) / 2, (l - b + 2) / 2, -9 / 16)
    assert hypergeom_1F3(*args) == pytest.approx(brute_1F3(*args), rel=1e-12)


def test_hypergeometric_derivative_identity():
    a, b1, b2, b3, x, h = 2.0, 2.5, 1.7, 3.1, -0.5, 1e-4
    fd = (hypergeom_1F3(a, b1, b2, b3, x + h) - hypergeom_1F3(a, b1, b2, b3, x - h)) / (2 * h)
    exact = a / (b1 * b2 * b3) * hypergeom_1F3(a + 1, b1 + 1, b2 + 1, b3 + 1, x)
    assert fd == pytest.approx(exact, rel=1e-6)


def test_legendre_examples():
    assert assoc_legendre(0, 0, 0.3) == 1.0
    assert assoc_legendre(1, 0, 0.5) == 0.5
    # Rodrigues: P_l^m(u) = (-1)^m (1-u^2)^(m/2) d^(l+m)/du^(l+m) (u^2-1)^l / (2^l l!)
    with mpmath.workdps(40):
        l, m, u = 5, 3, mpmath.mpf("0.3")
        d = mpmath.diff(lambda t: (t * t - 1) ** l, u, l + m)
        ref = (-1) ** m * (1 - u * u) ** (mpmath.mpf(m) / 2) * d / (2 ** l * mpmath.factorial(l))
    assert assoc_legendre(5, 3, 0.3) == pytest.approx(float(ref), rel=1e-13)
    assert spherical_harmonic(0, 0, 0.4, 1.0) == pytest.approx(1 / math.sqrt(4 * math.pi))
    assert spherical_harmonic(1, 0, 0.4, 1.0) == pytest.approx(math.sqrt(3 / (4 * math.pi)) * math.cos(0.4))


def test_conjugate_pairs_under_phi_reflection():
    # Y_{l,-m}(theta, -phi) = (-1)^m conj Y_lm(theta, -phi) = (-1)^m Y_lm(theta, phi), and
    # N_{l,-m} P_l^{-m} = (-1)^m N_lm P_l^m, so psi0 is unchanged by (phi, m) -> (-phi, -m)
    from gwbessel.gw_signal import psi0
    p = preset("desk")
    q = replace(p, phi=2 * math.pi - p.phi)
    for l, m in ((2, 1), (4, 3), (6, -2)):
        assert cmath.isclose(psi0(q, l, -m), psi0(p, l, m), rel_tol=1e-12)
