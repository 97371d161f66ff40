import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from humbertq.errors import DomainError, PoleError
from humbertq.hyp2var import (
    delta_coeff,
    phi3,
    phi3_bessel_expansion,
    phi3_reg,
    phi3_reg_negint_b,
    psi2,
    psi2_reg,
    psi2_reg_corollary1,
    psi2_reg_corollary2,
)
from humbertq.specfun import bessel_i, hyp1f1

# reference values from mpmath.hyper2d at 30 digits


def test_phi3_examples():
    assert phi3(1.3, 2.0, 0.0, 0.0) == 1.0
    assert phi3(1.2, 2.4, 0.8, 0.0) == pytest.approx(hyp1f1(1.2, 2.4, 0.8), rel=1e-14)
    assert phi3(1.0, 2.5, 1.1, 0.9) == pytest.approx(2.1919012067883679, rel=1e-12)


def test_phi3_laplace_transform():
    p, s, w, b, g = 2.0, 0.5, 0.3, 1.2, 1.8
    val, _ = quad(lambda t: math.exp(-p * t) * t ** (g - 1) * phi3(b, g, s * t, w * t), 0, 60,
                  epsabs=0, epsrel=1e-11, limit=200)
    ref = math.gamma(g) * p ** (b - g) * (p - s) ** (-b) * math.exp(w / p)
    assert val == pytest.approx(ref, rel=1e-7)


def test_phi3_pole():
    with pytest.raises(PoleError):
        phi3(1.0, -2.0, 0.3, 0.4)


def test_psi2_examples():
    assert psi2(0.4, 1.1, 2.2, 0.0, 0.0) == 1.0
    assert psi2(1.5, 2.5, 1.5, 0.6, 0.4) == pytest.approx(2.3939155198751627, rel=1e-12)
    assert psi2(0.8, 1.7, 2.9, 0.5, 1.2) == pytest.approx(2.1166417965410256, rel=1e-12)


def test_psi2_reduces_to_phi3():
    lhs = psi2(1.5, 2.5, 1.5, 0.6, 0.4)
    assert lhs == pytest.approx(math.e * phi3(1.0, 2.5, -0.6, 0.24), rel=1e-12)


@pytest.mark.parametrize("a,d", list(itertools.product((0.5, 1.3, 2.7), repeat=2)))
def test_psi2_phi3_relation_lattice(a, d):
    for w, z in itertools.product((0.2, 0.8, 1.5), repeat=2):
        assert psi2(a, d, a, w, z) == pytest.approx(math.exp(w + z) * phi3(d - a, d, -w, w * z), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(0.3, 3.0), st.floats(0.3, 3.0), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_psi2_symmetry(a, d, d2, w, z):
    assert psi2(a, d, d2, w, z) == pytest.approx(psi2(a, d2, d, z, w), rel=1e-11)


@pytest.mark.parametrize("b,g", [(-1.5, 0.6), (0.7, 1.8), (2.4, 3.5)])
def test_phi3_bessel_expansion(b, g):
    for z, w in itertools.product((-0.6, 0.4, 1.2), (0.2, 0.8, 1.5)):
        assert phi3_bessel_expansion(b, g, z, w) == pytest.approx(phi3(b, g, z, w), rel=1e-9)


def test_phi3_negint_b_examples():
    assert phi3_reg_negint_b(1, 2.0, 0.0, 1.0) == pytest.approx(bessel_i(1.0, 2.0), rel=1e-14)
    assert phi3_reg_negint_b(1, 2.0, 0.0, 1.0) == pytest.approx(1.5906368546373291, rel=1e-14)
    assert phi3_reg_negint_b(2, 1.5, 0.7, 0.9) == pytest.approx(0.6431958286647309, rel=1e-12)
    assert phi3_reg_negint_b(2, 1.5, 0.7, 0.9) == pytest.approx(phi3(-2, 1.5, 0.7, 0.9) / math.gamma(1.5), rel=1e-10)


def test_phi3_negint_b_pole_limit():
    at_pole = phi3_reg_negint_b(1, 0.0, 0.7, 0.9)
    assert at_pole == pytest.approx(-0.11623421296402835, rel=1e-12)
    g = 1e-6
    # the offset at g = 1e-6 is first order in g
    assert at_pole == pytest.approx(phi3(-1, g, 0.7, 0.9) / math.gamma(g), abs=1e-5)
    assert phi3_reg(-1, 0.0, 0.7, 0.9) == pytest.approx(at_pole, rel=1e-12)


def test_delta_coeff():
    assert delta_coeff(0, 1, 1.7, 0.4, 0.9) == 1.0
    assert delta_coeff(0, 3, 2.0, 2.0, 4.0) == pytest.approx(2.0, rel=1e-15)
    # hand evaluation: only the k = 1 term survives and gives 1/w
    assert delta_coeff(2, 2, 1.5, 0.5, 0.8) == pytest.approx(2.0, rel=1e-15)
    with pytest.raises(DomainError):
        delta_coeff(5, 2, 1.5, 0.5, 0.8)


def test_delta_coefficients_expand_phi3():
    # Phi3(b; g; w, z) = Gamma(g) sum_j delta_j Phi3~(1; g - j; w, z)
    b, g, w, z = 3, 3.6, 0.7, 0.45
    lhs = phi3(b, g, w, z)
    rhs = math.gamma(g) * math.fsum(delta_coeff(j, b, g, w, z) * phi3(1, g - j, w, z) / math.gamma(g - j)
                                    for j in range(2 * (b - 1) + 1))
    assert rhs == pytest.approx(lhs, rel=1e-11)


def test_marcum_expansion_examples():
    ref = math.e * phi3(1.0, 2.5, -0.6, 0.24) / math.gamma(2.5)
    assert psi2_reg_corollary1(1.5, 1, 0.6, 0.4) == pytest.approx(ref, rel=1e-11)
    assert psi2_reg_corollary1(2.0, 1, 0.3, 0.0) == pytest.approx(hyp1f1(2.0, 3.0, 0.3) / 2.0, rel=1e-14)
    assert psi2_reg_corollary1(0.7, 2, 1.1, 0.5) == pytest.approx(1.8729936142233111, rel=1e-11)


@pytest.mark.parametrize("a", [0.5, 1.3, 2.7, -0.4])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_marcum_expansion_vs_series(a, n):
    for w, z in itertools.product((0.2, 0.8, 1.5), repeat=2):
        assert psi2_reg_corollary1(a, n, w, z) == pytest.approx(psi2_reg(a, a + n, a, w, z), rel=1e-8)


@pytest.mark.parametrize("a,n", [(-1.0, 1), (-1.0, 3), (-3.0, 2)])
def test_marcum_expansion_pole_parameters(a, n):
    # the plain series has poles at d2 = a; the finite sum gives the limit
    val = psi2_reg_corollary1(a, n, 0.8, 0.6)
    assert math.isfinite(val)
    for eps in (1e-7, -1e-7):
        assert val == pytest.approx(psi2_reg(a + eps, a + eps + n, a + eps, 0.8, 0.6), rel=1e-5, abs=1e-6)


def test_marcum_expansion_pole_parameters_at_z_zero():
    # both denominators at poles; the value is the regularized 1F1(a; a+n; w)
    val = psi2_reg_corollary1(-3.0, 2, 0.8, 0.0)
    assert val == pytest.approx(psi2_reg_corollary1(-3.0, 2, 0.8, 1e-12), rel=1e-9)
    assert val == pytest.approx(psi2_reg_corollary1(-3.0 + 1e-9, 2, 0.8, 0.0), rel=1e-6)


def test_bessel_expansion_examples():
    ref = math.e * (bessel_i(0, 1.0) + bessel_i(1, 1.0))
    assert psi2_reg_corollary2(1.0, 1, 0.5, 0.5) == pytest.approx(ref, rel=1e-14)
    assert psi2_reg_corollary2(1.8, 2, 0.9, 0.3) == pytest.approx(8.6614883965386199, rel=1e-12)


def test_bessel_expansion_pole_limit():
    at_pole = psi2_reg_corollary2(0.0, 1, 0.4, 0.6)
    near = psi2(1e-6 + 1, 1e-6, 1e-6 + 1, 0.4, 0.6) / math.gamma(1e-6)
    assert math.isfinite(at_pole)
    assert at_pole == pytest.approx(near, rel=1e-5)


@pytest.mark.parametrize("a", [0.5, 1.3, 2.7, -0.4])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_bessel_expansion_vs_series(a, n):
    for w, z in itertools.product((0.2, 0.8, 1.5), repeat=2):
        assert psi2_reg_corollary2(a, n, w, z) == pytest.approx(psi2_reg(a + n, a, a + n, w, z), rel=1e-8)


@pytest.mark.parametrize("d", [0.0, -1.0, -2.0, -4.0])
def test_regularized_series_is_entire_in_d(d):
    vals = [psi2_reg(0.8, x, 1.4, 0.5, 0.3) for x in np.linspace(d - 1e-7, d + 1e-7, 5)]
    assert abs(vals[2]) > 0
    assert np.ptp(vals) < 1e-4 * max(abs(v) for v in vals)


@pytest.mark.parametrize("g", [0.0, -1.0, -3.0])
def test_regularized_phi3_at_poles(g):
    vals = [phi3_reg(1.3, x, 0.5, 0.3) for x in (g - 1e-7, g, g + 1e-7)]
    assert abs(vals[1]) > 0
    assert vals[1] == pytest.approx(vals[0], rel=1e-5)
    assert vals[1] == pytest.approx(vals[2], rel=1e-5)
