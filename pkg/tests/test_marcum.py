import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ncx2

from humbertq.errors import DomainError
from humbertq.hyp2var import phi3
from humbertq.marcum import (
    SignedSquareArg,
    marcum_p,
    marcum_q,
    marcum_q_array,
    marcum_recurrence_rhs,
    marcum_reduced_complement,
    marcum_phi3_M_lt_2,
    one_minus_q_lemma2,
    phi3_via_marcum,
)
from humbertq.oracle import quad_marcum
from humbertq.specfun import hyp1f1

# reference values from an independent high-precision evaluation
Q_2_1_1 = 0.94079021914652867
Q_25_2_3 = 0.84015651075395286
Q_27_14_22 = 0.91424368621787115
Q_05_1_1 = 0.52275013194817921
Q_15_07_22 = 0.62367169041437594
ONE_MINUS_Qm05_SWAPPED = 0.66799775603845336
ONE_MINUS_Q_17_2_1 = 0.064053857590931096
R_15_M08_M12 = 1.800829600275838
PHI3_2_22_05_03 = 1.7762528477857365
HYP1F1_3_31_11 = 2.9112157301919653


def ncx2_q(M, a2, b2):
    return ncx2.sf(b2, 2 * M, a2)


def test_beta_zero_is_one():
    assert marcum_q(2.5, 3.0, 0.0) == 1.0


def test_alpha_zero_is_exponential():
    assert marcum_q(1.0, 0.0, 2.0) == pytest.approx(math.exp(-1.0), rel=1e-14)


def test_derived_value():
    assert marcum_q(2.0, 1.0, 1.0) == pytest.approx(Q_2_1_1, rel=1e-13)


def test_signed_square_arguments_accepted():
    assert marcum_q(2.0, SignedSquareArg.real(1.0), SignedSquareArg(1.0)) == pytest.approx(Q_2_1_1, rel=1e-13)
    assert SignedSquareArg.imaginary(2.0).s == -4.0
    assert not SignedSquareArg(-1.0).is_real


def test_modified_marcum_is_real_and_finite():
    val = marcum_reduced_complement(1.5, -0.8, -1.2)
    assert isinstance(val, float)
    assert val == pytest.approx(R_15_M08_M12, rel=1e-12)


def test_modified_marcum_matches_long_independent_sum():
    # explicit Laguerre polynomials from scipy, summed to 500 terms
    from scipy.special import eval_genlaguerre, rgamma

    M, a2, b2 = 1.5, -0.8, -1.2
    x, y = a2 / 2, b2 / 2
    ref = math.exp(-x) * math.fsum(
        (-y) ** k * eval_genlaguerre(k, M - 1, x) * rgamma(M + k + 1) for k in range(500)
    )
    assert marcum_reduced_complement(M, a2, b2) == pytest.approx(ref, rel=1e-12)


def test_imaginary_integer_order_q_is_real():
    q = marcum_q(2.0, -0.8, -1.2)
    assert math.isfinite(q)
    assert q == pytest.approx(1 - marcum_reduced_complement(2.0, -0.8, -1.2) * 0.36, rel=1e-12)


def test_imaginary_beta_non_integer_order_rejected():
    with pytest.raises(DomainError):
        marcum_q(1.5, -0.8, -1.2)


def test_negative_non_integer_order_rejected():
    with pytest.raises(DomainError):
        marcum_q(-0.5, 1.0, 1.0)


@pytest.mark.parametrize("M,a2,b2", [(1, 1, 1), (2.5, 2, 3), (0.3, 0.5, 2), (4, 6, 1), (1.7, 0, 2)])
def test_matches_noncentral_chi2(M, a2, b2):
    ref = ncx2_q(M, a2, b2) if a2 > 0 else ncx2.sf(b2, 2 * M, 1e-300)
    assert marcum_q(M, a2, b2) == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("M", [-2, -1, 0, 1, 2, 3])
def test_reflection(M):
    for a2, b2 in itertools.product((0.25, 1.0, 4.0), repeat=2):
        assert marcum_q(M, a2, b2) + marcum_q(1 - M, b2, a2) == pytest.approx(1.0, abs=1e-10)


def test_marcum_p_complements():
    assert marcum_p(1.7, 2.0, 1.0) == pytest.approx(ONE_MINUS_Q_17_2_1, rel=1e-12)
    assert marcum_p(1.0, 0.0, 2.0) == pytest.approx(1 - math.exp(-1.0), rel=1e-14)


def test_recurrence_examples():
    assert marcum_recurrence_rhs(1.0, 1, 1.0, 1.0) == pytest.approx(marcum_q(2.0, 1.0, 1.0), rel=1e-12)
    assert marcum_recurrence_rhs(0.5, 2, 2.0, 3.0) == pytest.approx(Q_25_2_3, rel=1e-10)
    assert marcum_recurrence_rhs(1.0, 3, 0.5, 0.0) == 1.0


@pytest.mark.parametrize("M,n", list(itertools.product((0.5, 1.0, 2.3), (1, 2, 4))))
def test_recurrence_lattice(M, n):
    for a2, b2 in itertools.product((0.25, 1.0, 4.0), repeat=2):
        assert marcum_recurrence_rhs(M, n, a2, b2) == pytest.approx(marcum_q(M + n, a2, b2), rel=1e-10)


def test_recurrence_at_alpha_zero():
    assert marcum_recurrence_rhs(1.0, 2, 0.0, 2.0) == pytest.approx(marcum_q(3.0, 0.0, 2.0), rel=1e-12)


def test_phi3_relation_beta_zero():
    assert marcum_phi3_M_lt_2(1.0, 2.0, 0.0) == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("M", [-2, -1, 0, 1])
def test_phi3_relation_integer_orders(M):
    for a2, b2 in itertools.product((0.25, 1.0, 4.0), repeat=2):
        assert marcum_phi3_M_lt_2(M, a2, b2) == pytest.approx(marcum_q(M, a2, b2), abs=1e-10)


def test_phi3_relation_non_integer_order_is_swapped_complement():
    # non-integer M gives 1 - Q_{1-M}(beta, alpha), which only coincides with Q_M at integers
    assert marcum_phi3_M_lt_2(0.5, 1.0, 1.0) == pytest.approx(1 - Q_05_1_1, rel=1e-12)
    assert marcum_phi3_M_lt_2(1.5, 0.7, 2.2) == pytest.approx(ONE_MINUS_Qm05_SWAPPED, rel=1e-12)
    assert marcum_q(1.5, 0.7, 2.2) == pytest.approx(Q_15_07_22, rel=1e-12)


def test_complement_phi3_examples():
    assert one_minus_q_lemma2(1.0, 0.0, 2.0) == pytest.approx(1 - math.exp(-1.0), rel=1e-13)
    assert one_minus_q_lemma2(0.3, 1.5, 0.0) == 0.0
    assert one_minus_q_lemma2(1.7, 2.0, 1.0) == pytest.approx(ONE_MINUS_Q_17_2_1, rel=1e-12)


@pytest.mark.parametrize("M,a2,b2", [(0.5, 1, 1), (1.5, 0.7, 2.2), (2.7, 1.4, 2.2), (1, 4, 0.25), (3.2, 0.25, 4)])
def test_complement_phi3_vs_quadrature(M, a2, b2):
    assert one_minus_q_lemma2(M, a2, b2) == pytest.approx(1 - quad_marcum(M, a2, b2).value, rel=1e-8)


@pytest.mark.parametrize("M,a2,b2", [(2, 1, 1), (2.5, 2, 3), (2.7, 1.4, 2.2), (0.5, 1, 1), (1.5, 0.7, 2.2)])
def test_vs_quadrature(M, a2, b2):
    assert marcum_q(M, a2, b2) == pytest.approx(quad_marcum(M, a2, b2).value, rel=1e-8)


def test_frozen_quadrature_values():
    assert marcum_q(2.7, 1.4, 2.2) == pytest.approx(Q_27_14_22, rel=1e-12)
    assert marcum_q(0.5, 1.0, 1.0) == pytest.approx(Q_05_1_1, rel=1e-12)


def test_phi3_via_marcum_single_term():
    t, v, g = 0.8, 0.4, 1.5
    expected = math.gamma(g) * math.exp(v / t + t) * t ** (1 - g) * (1 - marcum_q(g - 1, 2 * v / t, 2 * t))
    assert phi3_via_marcum(1, g, t, v) == pytest.approx(expected, rel=1e-12)


def test_phi3_via_marcum_derived():
    assert phi3_via_marcum(2, 2.2, 0.5, 0.3) == pytest.approx(PHI3_2_22_05_03, rel=1e-10)
    assert phi3_via_marcum(2, 2.2, 0.5, 0.3) == pytest.approx(phi3(2, 2.2, 0.5, 0.3), rel=1e-10)


def test_phi3_via_marcum_v_zero():
    assert phi3_via_marcum(3, 3.1, 1.1, 0.0) == pytest.approx(HYP1F1_3_31_11, rel=1e-10)
    assert phi3_via_marcum(3, 3.1, 1.1, 0.0) == pytest.approx(hyp1f1(3, 3.1, 1.1), rel=1e-10)


@pytest.mark.parametrize("M", [0.5, 1.0, 2.5])
def test_monotone_in_beta(M):
    for a2 in (0.25, 1.0, 4.0):
        vals = [marcum_q(M, a2, b2) for b2 in np.linspace(0, 12, 100)]
        assert all(b <= a + 1e-15 for a, b in zip(vals, vals[1:]))


def test_array_matches_scalar():
    b2 = np.array([0.1, 1.0, 3.0, 9.0])
    arr = marcum_q_array(1.5, 2.0, b2)
    assert arr == pytest.approx([marcum_q(1.5, 2.0, b) for b in b2], rel=1e-12)


@pytest.mark.parametrize("M", [-3.0, -2.0, -1.0])
def test_reduced_complement_continuous_at_negative_integers(M):
    at = marcum_reduced_complement(M, -1.2, -1.6)
    near = marcum_reduced_complement(M + 1e-9, -1.2, -1.6)
    assert at != 0.0
    assert at == pytest.approx(near, rel=1e-7)


@settings(max_examples=60, deadline=None)
@given(
    M=st.floats(0.1, 6.0),
    a2=st.floats(0.0, 20.0),
    b2=st.floats(0.0, 20.0),
)
def test_range_and_chi2_agreement(M, a2, b2):
    q = marcum_q(M, a2, b2)
    assert 0.0 <= q <= 1.0
    ref = ncx2.sf(b2, 2 * M, max(a2, 1e-300))
    assert q == pytest.approx(ref, rel=1e-8, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(M=st.floats(0.2, 4.0), s=st.floats(-4.0, -0.25), t=st.floats(-4.0, -0.25))
def test_modified_marcum_finite(M, s, t):
    assert math.isfinite(marcum_reduced_complement(M, s, t))
