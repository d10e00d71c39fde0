import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthobound import _backend
from orthobound.mfunc import (
    MnConfig,
    MnRegime,
    mn,
    mn_closed,
    mn_large_b,
    mn_lower_bound,
    mn_near_one,
    mn_oracle,
    munif_numerator,
)
from orthobound.quadrature import QuadratureBudgetError, QuadratureOptions
from orthobound.specfun import harmonic

from reference import mn_ref

GRID_B = (1.001, 1.01, 1.1, 1.5, 2.0, 5.0, 20.0, 200.0)


def near_limit(n):
    return 2.0 * harmonic(n - 2) / ((n - 1) * (n - 2))


# ---- closed form against a 400-digit evaluation of the verbatim formula ----


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 12, 20])
@pytest.mark.parametrize("b", [1 + 1e-9, 1 + 1e-6, 1.001, 1.01, 1.3, 2.0, 7.5, 50.0, 999.0, 1e3, 1e5, 1e9, 1e12])
def test_mn_against_high_precision_reference(backend, n, b):
    assert mn(n, b).value == pytest.approx(float(mn_ref(n, b)), rel=5e-14)


@pytest.mark.parametrize("n", [3, 5, 8])
@pytest.mark.parametrize("b", [1.01, 1.5, 2.0, 20.0, 200.0])
def test_mn_closed_double_accuracy(backend, n, b):
    # inside the closed-form regime the double evaluation loses about b*eps
    assert mn_closed(n, b) == pytest.approx(float(mn_ref(n, b)), rel=max(1e-14, 4e-16 * b))


# ---- worked examples ------------------------------------------------------


@pytest.mark.parametrize("n,b", [(3, 2.0), (4, 1.5), (5, 10.0)])
def test_mn_closed_matches_oracle(backend, n, b):
    assert mn_closed(n, b) == pytest.approx(mn_oracle(n, b).value, rel=1e-8)


def test_oracle_near_one_limit(backend):
    b = 1.0001
    assert (b - 1.0) * mn_oracle(3, b).value == pytest.approx(1.0, rel=1e-2)


def test_oracle_large_b_agrees_with_closed_form(backend):
    # the scaled value b^2/log b M_3 is still 11.7% above its limit 2 here
    res = mn_oracle(3, 1e3)
    assert res.converged
    assert res.value == pytest.approx(float(mn_ref(3, 1e3)), rel=1e-8)
    ratio = 1e3**2 / math.log(1e3) * res.value / 2.0
    assert 1.1 < ratio < 1.13


def test_oracle_positive_and_converged(backend):
    res = mn_oracle(6, 2.0)
    assert res.value > 0.0
    assert res.converged
    assert res.abs_error_estimate <= 1e-10 * res.value


def test_near_one_examples(backend):
    b = 1.0 + 1e-6
    assert mn_near_one(4, b) == pytest.approx(0.5e12, rel=1e-3)
    b = 1.0 + 1e-8
    assert mn_near_one(3, b) == pytest.approx(1.0 / (b - 1.0), rel=1e-3)
    assert mn_near_one(5, 1.0005) == pytest.approx(mn_oracle(5, 1.0005).value, rel=1e-5)


def test_large_b_examples(backend):
    assert mn_large_b(3, 1e3) == pytest.approx(mn_oracle(3, 1e3).value, rel=1e-4)
    for n in (3, 4):
        b = 1e4
        assert mn_large_b(n, b) == pytest.approx(float(mn_ref(n, b)), rel=1e-14)


def test_dispatch_identity(backend):
    v = mn(3, 2.0)
    assert v.value == mn_closed(3, 2.0)
    assert v.regime is MnRegime.CLOSED_FORM
    assert v.dimension == 3 and v.argument == 2.0
    assert mn(3, 1.0005).regime is MnRegime.NEAR_ONE_SERIES
    assert mn(3, 5e3).regime is MnRegime.LARGE_B_ASYMPTOTIC


@pytest.mark.parametrize("n", [3, 4, 6, 8, 12])
def test_continuity_at_near_one_threshold(backend, n):
    cfg = MnConfig()
    edge = 1.0 + cfg.near_one_delta
    inside = mn(n, edge, cfg)
    outside = mn(n, math.nextafter(edge, 2.0), cfg)
    assert inside.regime is MnRegime.NEAR_ONE_SERIES
    assert outside.regime is MnRegime.CLOSED_FORM
    assert outside.value == pytest.approx(inside.value, rel=1e-9)


@pytest.mark.parametrize("n", [3, 4, 6, 8, 12])
def test_continuity_at_large_b_threshold(backend, n):
    cfg = MnConfig()
    below = mn(n, math.nextafter(cfg.large_b, 0.0), cfg)
    at = mn(n, cfg.large_b, cfg)
    assert below.regime is MnRegime.CLOSED_FORM
    assert at.regime is MnRegime.LARGE_B_ASYMPTOTIC
    assert at.value == pytest.approx(below.value, rel=1e-9)


def test_seven_fifty_matches_oracle(backend):
    v = mn(7, 50.0).value
    assert v > 0.0
    assert v == pytest.approx(mn_oracle(7, 50.0).value, rel=1e-7)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_decimal_path_agrees_with_double_double(n):
    b = 1e13
    dd = mn_large_b(n, b, MnConfig())
    dec = mn_large_b(n, b, MnConfig(decimal_above=1e4))
    assert dec == pytest.approx(dd, rel=1e-14)
    assert dec == pytest.approx(float(mn_ref(n, b)), rel=1e-14)


@pytest.mark.parametrize("n", [3, 6])
def test_decimal_path_far_out(n):
    b = 1e40
    assert mn(n, b).value == pytest.approx(float(mn_ref(n, b, dps=600)), rel=1e-13)


# ---- the two limits -------------------------------------------------------


@pytest.mark.parametrize("n", range(3, 9))
def test_near_one_limit(backend, n):
    b = 1.0 + 1e-6
    scaled = (b - 1.0) ** (n - 2) * mn(n, b).value
    assert scaled == pytest.approx(near_limit(n), rel=5e-3)


@pytest.mark.parametrize("n", range(3, 9))
def test_large_b_ratio_decreases_toward_limit(backend, n):
    # the scaled value approaches 4/(n-1) from above, only logarithmically
    bs = [10.0**k for k in range(3, 16)]
    ratios = [b ** (n - 1) / math.log(b) * mn(n, b).value / (4.0 / (n - 1)) for b in bs]
    assert all(r > 1.0 for r in ratios)
    assert all(r1 < r0 for r0, r1 in zip(ratios, ratios[1:]))
    # (ratio - 1) log b settles to a constant, the signature of a 1/log b correction
    c = [(r - 1.0) * math.log(b) for r, b in zip(ratios, bs)]
    assert abs(c[-1] - c[-2]) < 0.05 * c[-1]


# ---- oracle grid and lower bound -----------------------------------------


@pytest.mark.parametrize("n", range(3, 9))
def test_oracle_grid_agreement(backend, n):
    for b in GRID_B:
        ref = mn_oracle(n, b)
        assert ref.converged
        val = mn(n, b).value
        assert abs(val - ref.value) <= max(1e-8, 1e-6 * ref.value)


@pytest.mark.parametrize("n", range(3, 13))
def test_uniform_lower_bound_holds(n):
    for b in (1.01, 1.1, 1.3, 1.5, 1.8, 2.0):
        assert mn(n, b).value >= mn_lower_bound(n, b)


def test_lower_bound_examples():
    assert munif_numerator(3) == pytest.approx(2.0 / 3.0 * (1.0 + math.log(0.75)), rel=1e-15)
    assert munif_numerator(3) == pytest.approx(0.474879, abs=1e-6)
    assert mn_lower_bound(3, 2.0) == pytest.approx(munif_numerator(3) / 2.0, rel=1e-15)
    assert mn_lower_bound(3, 2.0) == pytest.approx(0.2374393, abs=1e-7)
    a4 = (1.0 + 8.0 / 9.0 * (1.5 + math.log(0.75))) / 6.0
    assert mn_lower_bound(4, 1.5) == pytest.approx(a4 / 0.25, rel=1e-14)


@pytest.mark.parametrize("b", [1.0, 2.0000001, 3.0])
def test_lower_bound_domain(b):
    with pytest.raises(ValueError):
        mn_lower_bound(3, b)


# ---- properties ----------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 12), st.floats(1e-7, 12.0))
def test_positive_and_decreasing(n, log_bm1_span):
    b = 1.0 + 10.0 ** (log_bm1_span - 7.0)
    v0 = mn(n, b).value
    v1 = mn(n, b * 1.01).value
    assert v0 > 0.0
    assert v1 < v0


# ---- errors and configuration --------------------------------------------


@pytest.mark.parametrize("fn", [mn_closed, mn_near_one, mn_large_b, lambda n, b: mn(n, b)])
@pytest.mark.parametrize("b", [1.0, 0.5, -3.0, math.nan, math.inf])
def test_domain_errors(fn, b):
    with pytest.raises(ValueError):
        fn(3, b)


def test_regime_preconditions():
    with pytest.raises(ValueError):
        mn_near_one(3, 1.5)
    with pytest.raises(ValueError):
        mn_large_b(3, 10.0)


@pytest.mark.parametrize("n", [2, 0])
def test_dimension_checked(n):
    with pytest.raises(ValueError):
        mn(n, 2.0)


def test_dimension_must_be_integer():
    with pytest.raises(TypeError):
        mn(3.0, 2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        MnConfig(near_one_delta=0.0)
    with pytest.raises(ValueError):
        MnConfig(near_one_delta=0.5, large_b=1.2)
    with pytest.raises(ValueError):
        MnConfig(large_b=1e6, decimal_above=1e5)


def test_config_from_env(monkeypatch):
    monkeypatch.setenv("ORTHOBOUND_NEAR_ONE_DELTA", "1e-2")
    monkeypatch.setenv("ORTHOBOUND_LARGE_B", "500")
    cfg = MnConfig.from_env()
    assert cfg.near_one_delta == 1e-2 and cfg.large_b == 500.0
    assert mn(3, 1.005).regime is MnRegime.NEAR_ONE_SERIES
    assert mn(3, 600.0).regime is MnRegime.LARGE_B_ASYMPTOTIC


@pytest.mark.parametrize("delta,big", [(1e-4, 1e2), (1e-2, 1e4)])
def test_results_insensitive_to_thresholds(delta, big):
    cfg = MnConfig(near_one_delta=delta, large_b=big)
    for n in (3, 7):
        for b in (1.0005, 1.005, 50.0, 500.0, 5e3):
            assert mn(n, b, cfg).value == pytest.approx(mn(n, b).value, rel=1e-11)


def test_oracle_budget_error(backend):
    with pytest.raises(QuadratureBudgetError):
        mn_oracle(3, 2.0, QuadratureOptions(abs_tol=1e-300, rel_tol=1e-10, max_evals=500))


def test_backend_name():
    assert _backend.BACKEND in ("compiled", "python")
