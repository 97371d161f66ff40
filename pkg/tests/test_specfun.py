import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from humbertq.errors import PoleError
from humbertq.specfun import (
    EvalConfig,
    bessel_i,
    gamma_pq,
    hyp0f1,
    hyp1f1,
    laguerre,
    ln_gamma,
    pochhammer,
    upper_gamma_reg,
)


def test_ln_gamma_values():
    assert ln_gamma(1.0) == (0.0, 1)
    val, sign = ln_gamma(0.5)
    assert sign == 1 and val == pytest.approx(0.5723649429247001, rel=1e-14)
    # mpmath: log(4 sqrt(pi) / 3)
    val, sign = ln_gamma(-1.5)
    assert sign == 1 and val == pytest.approx(0.86004701537648101, rel=1e-13)
    assert ln_gamma(-0.5)[1] == -1


@pytest.mark.parametrize("x", [0.0, -1.0, -4.0])
def test_ln_gamma_poles(x):
    with pytest.raises(PoleError):
        ln_gamma(x)


def test_pochhammer():
    assert pochhammer(3.0, 0) == 1.0
    assert pochhammer(0.0, 0) == 1.0
    assert pochhammer(-2.0, 3) == 0.0
    assert pochhammer(0.5, 3) == pytest.approx(1.875, rel=1e-15)


def test_bessel_i_examples():
    assert bessel_i(0.0, 0.0) == 1.0
    assert bessel_i(0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.sinh(1.0), rel=1e-14)
    # mpmath besseli(2.3, 3.7)
    assert bessel_i(2.3, 3.7) == pytest.approx(3.9145422412971738, rel=1e-13)


@pytest.mark.parametrize("n", [1, 2, 5])
@pytest.mark.parametrize("x", [0.1, 1.0, 5.0, 20.0])
def test_bessel_i_integer_symmetry(n, x):
    assert bessel_i(-n, x) == pytest.approx(bessel_i(n, x), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3.7, 6.0), st.floats(0.01, 40.0))
def test_bessel_i_matches_scipy(nu, x):
    assert bessel_i(nu, x) == pytest.approx(special.iv(nu, x), rel=1e-11, abs=1e-300)


def test_hyp0f1_examples():
    assert hyp0f1(1.5, 0.0) == 1.0
    assert hyp0f1(1.0, 1.0) == pytest.approx(2.2795853023360673, rel=1e-14)
    assert hyp0f1(2.5, 4.2) == pytest.approx(4.0699820524542176, rel=1e-13)
    with pytest.raises(PoleError):
        hyp0f1(-2.0, 1.0)


@pytest.mark.parametrize("q", [0.5, 1.3, 4.0])
@pytest.mark.parametrize("z", [0.2, 2.0, 9.0])
def test_hyp0f1_bessel_identity(q, z):
    via_bessel = math.gamma(q) * z ** ((1 - q) / 2) * bessel_i(q - 1, 2 * math.sqrt(z))
    assert hyp0f1(q, z) == pytest.approx(via_bessel, rel=1e-11)


def test_hyp1f1_examples():
    assert hyp1f1(0.9, 0.9, 1.7) == pytest.approx(math.exp(1.7), rel=1e-14)
    assert hyp1f1(1.0, 2.0, 1.0) == pytest.approx(math.e - 1.0, rel=1e-14)
    assert hyp1f1(0.7, 2.1, -8.0) == pytest.approx(0.2646939245280638, rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.floats(-2.5, 4.0), st.floats(0.3, 6.0), st.floats(-20.0, 20.0))
def test_hyp1f1_matches_scipy(s, q, w):
    ref = special.hyp1f1(s, q, w)
    assert hyp1f1(s, q, w) == pytest.approx(ref, rel=1e-9, abs=1e-12 * max(1.0, abs(ref)))


def test_laguerre_examples():
    assert laguerre(0, 2.3, 0.7) == 1.0
    assert laguerre(1, 0.5, 2.0) == pytest.approx(-0.5, rel=1e-15)
    assert laguerre(5, 1.5, 0.8) == pytest.approx(0.12458808333333301, rel=1e-12)


@pytest.mark.parametrize("k", range(11))
def test_laguerre_vs_scipy(k):
    for a in (0.0, 0.5, 3.2):
        for x in (0.3, 1.7, 6.0):
            ref = special.eval_genlaguerre(k, a, x)
            assert laguerre(k, a, x) == pytest.approx(ref, rel=1e-11, abs=1e-11)


def test_upper_gamma_examples():
    assert upper_gamma_reg(2.7, 0.0) == 1.0
    assert upper_gamma_reg(1.0, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-14)
    assert upper_gamma_reg(2.5, 4.60517) == pytest.approx(0.1009628392575874, rel=1e-12)


def test_upper_gamma_monotone():
    xs = [0.1 * i for i in range(100)]
    vals = [upper_gamma_reg(3.3, x) for x in xs]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 60.0), st.floats(0.0, 120.0))
def test_gamma_pq_complementary(a, x):
    p, q = gamma_pq(a, x)
    assert p + q == pytest.approx(1.0, abs=1e-13)
    assert q == pytest.approx(special.gammaincc(a, x), rel=1e-10, abs=1e-300)


def test_eval_config_validation(monkeypatch):
    with pytest.raises(ValueError):
        EvalConfig(rel_tol=0.1)
    with pytest.raises(ValueError):
        EvalConfig(max_terms=10)
    monkeypatch.setenv("HUMBERTQ_MAX_TERMS", "777")
    assert EvalConfig.from_env().max_terms == 777
