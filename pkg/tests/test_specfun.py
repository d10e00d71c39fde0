import math

import mpmath as mp
import pytest
import scipy.special as sc
from hypothesis import given, settings
from hypothesis import strategies as st

from orthobound.specfun import (
    beta,
    cosh_power_integral,
    harmonic,
    incomplete_beta,
    l_fn,
    log_gamma,
    log_sphere_volume,
    p_poly,
    sinh_power_integral,
    sphere_volume,
)
from orthobound.specfun import _l_tail

from reference import l_ref, p_ref, sphere_volume_ref


def test_p_poly_zero_order_is_identically_zero():
    assert p_poly(0, 0.7) == 0.0
    assert p_poly(0, -123.0) == 0.0


def test_p_poly_at_one_is_harmonic():
    assert p_poly(2, 1.0) == 1.5
    assert p_poly(7, 1.0) == pytest.approx(harmonic(7), rel=1e-15)


def test_p_poly_matches_term_summation():
    direct = math.fsum(0.3**j / j for j in range(1, 6))
    assert p_poly(5, 0.3) == pytest.approx(direct, abs=1e-15)


@given(st.integers(0, 30), st.floats(-10, 10))
def test_p_poly_relative_accuracy(k, x):
    with mp.workdps(50):
        ref = p_ref(k, x)
    assert abs(p_poly(k, x) - float(ref)) <= 1e-14 * max(abs(float(ref)), 1e-300) + 1e-300 or k == 0


def test_p_poly_rejects_negative_order():
    with pytest.raises(ValueError):
        p_poly(-1, 0.5)


def test_l_fn_order_zero():
    assert l_fn(0, -1.0) == pytest.approx(math.log(2.0), rel=1e-15)


def test_l_fn_matches_direct_formula():
    # log(0.6) + 0.4 + 0.08 + 0.064/3 evaluated at 30 digits
    expected = float(mp.log(mp.mpf("0.6")) + mp.mpf("0.4") + mp.mpf("0.08") + mp.mpf("0.064") / 3)
    assert l_fn(3, 0.4) == pytest.approx(expected, rel=1e-13)
    assert expected == pytest.approx(-0.00949229043, rel=1e-9)


def test_l_fn_branches_agree_at_quarter():
    log_form = math.log(0.75) + p_poly(2, 0.25)
    assert _l_tail(2, 0.25) == pytest.approx(log_form, rel=1e-14)


@given(st.integers(0, 25), st.floats(-0.5, 0.5).filter(lambda x: x != 0.0))
def test_l_fn_branches_agree(k, x):
    # the log form evaluated exactly agrees with the tail series
    with mp.workdps(40 + int((k + 1) * abs(math.log10(abs(x))))):
        exact_log_form = float(mp.log(1 - mp.mpf(x)) + p_ref(k, mp.mpf(x)))
    assert _l_tail(k, x) == pytest.approx(exact_log_form, rel=1e-13)


@given(st.integers(0, 25), st.floats(-0.5, 0.5).filter(lambda x: x != 0.0))
def test_l_fn_branches_agree_in_double(k, x):
    # in double the log form carries its cancellation error, bounded by the
    # size of the cancelled terms
    log_form = math.log1p(-x) + p_poly(k, x)
    scale = abs(math.log1p(-x)) + p_poly(k, abs(x))
    assert abs(_l_tail(k, x) - log_form) <= 1e-13 * abs(log_form) + 8 * 2.2e-16 * scale


@given(st.integers(0, 40), st.floats(-0.999, 0.999))
def test_l_plus_p_is_log(k, x):
    assert l_fn(k, x) - p_poly(k, x) == pytest.approx(math.log(1.0 - x), abs=1e-13)


@given(st.integers(0, 20), st.floats(-0.5, 0.5))
def test_l_fn_tail_against_mpmath(k, x):
    # the log form cancels about (k+1)|log10 x| digits; carry them all
    dps = 40 + int((k + 1) * abs(math.log10(abs(x)))) if x != 0 else 40
    with mp.workdps(dps):
        ref = float(l_ref(k, mp.mpf(x))) if x != 0 else 0.0
    assert l_fn(k, x) == pytest.approx(ref, rel=1e-13, abs=1e-300)


def test_l_fn_domain_error_at_one():
    with pytest.raises(ValueError):
        l_fn(3, 1.0)


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
    assert log_gamma(10.0) == pytest.approx(math.log(362880.0), rel=1e-15)


@pytest.mark.parametrize("x", [0.5, 0.75, 1.5, 2.5, 7.3, 33.0, 101.5, 199.9])
def test_log_gamma_relative_error(x):
    ref = float(mp.loggamma(mp.mpf(x)))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-14, abs=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_domain(x):
    with pytest.raises(ValueError):
        log_gamma(x)


def test_beta_examples():
    assert beta(1, 1) == pytest.approx(1.0, rel=1e-15)
    assert beta(2, 3) == pytest.approx(1.0 / 12.0, rel=1e-14)
    assert beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)


@given(st.floats(0.1, 60), st.floats(0.1, 60))
def test_beta_against_scipy(a, b):
    assert beta(a, b) == pytest.approx(sc.beta(a, b), rel=1e-13)


def test_beta_domain():
    with pytest.raises(ValueError):
        beta(0.0, 1.0)


def test_incomplete_beta_examples():
    assert incomplete_beta(0.0, 2.0, 3.0) == 0.0
    assert incomplete_beta(1.0, 2.0, 3.0) == pytest.approx(1.0 / 12.0, rel=1e-13)
    assert incomplete_beta(0.5, 1.0, 1.0) == pytest.approx(0.5, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.5, 30), st.floats(0.5, 30))
def test_incomplete_beta_against_scipy(x, a, b):
    ref = sc.betainc(a, b, x) * sc.beta(a, b)
    assert abs(incomplete_beta(x, a, b) - ref) <= 1e-13 * sc.beta(a, b)


@pytest.mark.parametrize("a,b", [(0.5, 0.5), (0.5, 2.0), (3.0, 0.7), (12.5, 13.5)])
def test_incomplete_beta_monotone_and_complete(a, b):
    xs = [i / 20 for i in range(21)]
    vals = [incomplete_beta(x, a, b) for x in xs]
    assert all(v1 >= v0 for v0, v1 in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(beta(a, b), rel=1e-13)


@pytest.mark.parametrize("x", [-0.1, 1.1])
def test_incomplete_beta_domain(x):
    with pytest.raises(ValueError):
        incomplete_beta(x, 1.0, 1.0)


def test_sphere_volume_examples():
    assert sphere_volume(0) == 2.0
    assert sphere_volume(1) == pytest.approx(2.0 * math.pi, rel=1e-15)
    assert sphere_volume(2) == pytest.approx(4.0 * math.pi, rel=1e-15)


@pytest.mark.parametrize("n", [3, 4, 7, 20, 100, 299, 300, 301, 1000])
def test_sphere_volume_against_mpmath(n):
    ref = sphere_volume_ref(n)
    assert sphere_volume(n) == pytest.approx(float(ref), rel=1e-12, abs=0.0)
    assert log_sphere_volume(n) == pytest.approx(float(mp.log(ref)), rel=1e-13)


def test_cosh_power_integral_examples():
    assert cosh_power_integral(2, 1.0) == pytest.approx(math.sinh(1.0), rel=1e-15)
    for n in range(2, 8):
        assert cosh_power_integral(n, 0.0) == 0.0
    expected = (math.sinh(0.8) * math.cosh(0.8) + 0.8) / 2.0
    assert cosh_power_integral(3, 0.8) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.9938920, abs=1e-7)


def test_sinh_power_integral_examples():
    assert sinh_power_integral(2, 1.0) == pytest.approx(math.cosh(1.0) - 1.0, rel=1e-15)
    for m in range(2, 8):
        assert sinh_power_integral(m, 0.0) == 0.0
    expected = (math.sinh(1.0) * math.cosh(1.0) - 1.0) / 2.0
    assert sinh_power_integral(3, 1.0) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("n", range(2, 11))
@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0])
def test_power_integrals_against_quadrature(n, x):
    s_ref = mp.quad(lambda r: mp.cosh(r) ** (n - 1), [0, x])
    h_ref = mp.quad(lambda r: mp.sinh(r) ** (n - 1), [0, x])
    assert abs(cosh_power_integral(n, x) - float(s_ref)) <= 1e-11
    assert abs(sinh_power_integral(n, x) - float(h_ref)) <= 1e-11


@pytest.mark.parametrize("m", [2, 3, 6, 11])
def test_sinh_power_integral_relative_accuracy_small_radius(m):
    # the recurrence would cancel here; the series keeps full relative accuracy
    for r in (1e-6, 1e-3, 0.3, 0.999, 1.0, 1.001):
        ref = mp.quad(lambda t: mp.sinh(t) ** (m - 1), [0, r])
        assert sinh_power_integral(m, r) == pytest.approx(float(ref), rel=1e-12)


@given(st.integers(2, 12), st.floats(0.0, 5.0), st.floats(1e-3, 1.0))
def test_cosh_power_integral_increasing(n, x, dx):
    assert cosh_power_integral(n, x + dx) > cosh_power_integral(n, x)


def test_power_integral_domains():
    with pytest.raises(ValueError):
        cosh_power_integral(1, 1.0)
    with pytest.raises(ValueError):
        cosh_power_integral(3, -1.0)
    with pytest.raises(ValueError):
        sinh_power_integral(1, 1.0)
    with pytest.raises(ValueError):
        sinh_power_integral(3, -1.0)


@pytest.mark.parametrize("z", [0.5 * j for j in range(1, 101)])
def test_legendre_duplication(z):
    residual = (
        log_gamma(z)
        + log_gamma(z + 0.5)
        - (1 - 2 * z) * math.log(2.0)
        - 0.5 * math.log(math.pi)
        - log_gamma(2 * z)
    )
    assert abs(residual) <= 1e-12


@pytest.mark.parametrize("x", [1.0 + 0.5 * j for j in range(199)])
def test_gamma_sandwich(x):
    lg = log_gamma(x + 1.0)
    stirling = (x + 0.5) * math.log(x) - x
    assert 0.5 * math.log(2 * math.pi) + stirling <= lg <= 1.0 + stirling


@pytest.mark.parametrize("a", [0.5 * j for j in range(3, 51)])
def test_beta_halving(a):
    assert incomplete_beta(0.5, a - 1.0, a) >= beta(a - 1.0, a) / 2.0
