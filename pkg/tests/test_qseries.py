"""Oracle tests for the q-series kernel.

Expected values were produced independently of the implementation: by hand
for the small closed forms, and by exact Fraction arithmetic for truncated
infinite products.
"""

from fractions import Fraction
import math

import numpy as np
import pytest

from aseplab.qseries import (
    IntPoly,
    QParam,
    TruncationNotConverged,
    TruncationPolicy,
    jacobi_triple_product,
    log_neg_pochhammer_infinite,
    log_qbinomial,
    pochhammer_finite,
    pochhammer_infinite,
    pochhammer_inversion,
    q_pascal_check,
    qbinomial,
    qbinomial_poly,
    shifted_pochhammer_ratio,
)


def frac_pochhammer_infinite(a, q, terms=120):
    """Truncated (a;q)_infty in exact rational arithmetic.

    Keep q a small rational with q <= 1/2 so the truncation tail is far below
    double precision and the exact denominators stay manageable.
    """
    out = Fraction(1)
    t = Fraction(a)
    for _ in range(terms):
        out *= 1 - t
        t *= Fraction(q)
    return float(out)


def test_qparam_rejects_boundary():
    with pytest.raises(ValueError):
        QParam(0.0)
    with pytest.raises(ValueError):
        QParam(1.0)
    with pytest.raises(ValueError):
        QParam(1.3)


def test_pochhammer_finite_hand_values():
    # (1/2;1/2)_3 = (1/2)(3/4)(7/8)
    assert pochhammer_finite(0.5, 0.5, 3) == pytest.approx(0.328125, rel=0, abs=0)
    assert pochhammer_finite(0.3, 0.7, 0) == 1.0
    # (-1;1/2)_2 = 2 * 3/2
    assert pochhammer_finite(-1.0, 0.5, 2) == pytest.approx(3.0)


def test_pochhammer_finite_negative_n_rejected():
    with pytest.raises(ValueError):
        pochhammer_finite(0.5, 0.5, -1)


def test_pochhammer_infinite_matches_fraction_oracle():
    cases = [
        (Fraction(1, 2), Fraction(1, 2)),
        (Fraction(-1), Fraction(1, 2)),
        (Fraction(9, 10), Fraction(3, 10)),
        (Fraction(-2), Fraction(1, 4)),
        (Fraction(1, 10), Fraction(2, 5)),
    ]
    for a, q in cases:
        want = frac_pochhammer_infinite(a, q)
        got, bound = pochhammer_infinite(float(a), float(q))
        assert bound < 1e-12
        np.testing.assert_allclose(got, want, rtol=1e-12)


def test_pochhammer_infinite_slow_q_self_consistent():
    # at q = 0.9 check the peel off identity (a;q)_infty = (1-a)(aq;q)_infty
    # instead of an exact rational oracle (the tail needs hundreds of terms)
    for a in (0.5, -1.0, 0.37):
        full, _ = pochhammer_infinite(a, 0.9)
        tail, _ = pochhammer_infinite(a * 0.9, 0.9)
        np.testing.assert_allclose(full, (1.0 - a) * tail, rtol=1e-12)


def test_pochhammer_infinite_split_factor():
    # (-1;q)_infty = 2 (-q;q)_infty, peeling the i=0 factor
    got, _ = pochhammer_infinite(-1.0, 0.5)
    tail, _ = pochhammer_infinite(-0.5, 0.5)
    np.testing.assert_allclose(got, 2.0 * tail, rtol=1e-13)


def test_pochhammer_infinite_tail_bound_honest():
    # with a loose policy the value differs from a tight one by less than
    # the reported bound
    loose = TruncationPolicy(eps=1e-6, max_terms=10_000)
    v_loose, b_loose = pochhammer_infinite(0.7, 0.5, loose)
    v_tight, _ = pochhammer_infinite(0.7, 0.5)
    assert abs(v_loose - v_tight) <= b_loose * abs(v_tight)


def test_pochhammer_infinite_not_converged():
    pol = TruncationPolicy(eps=1e-30, max_terms=3)
    with pytest.raises(TruncationNotConverged):
        pochhammer_infinite(0.5, 0.99, pol)


def test_log_neg_pochhammer_infinite_consistent():
    for x, q in [(0.0, 0.5), (2.5, 0.5), (-3.0, 0.5), (-1.7, 0.9), (4.0, 0.1)]:
        lv, bound = log_neg_pochhammer_infinite(x, q)
        direct, _ = pochhammer_infinite(-(q ** x), q)
        assert bound < 1e-12
        np.testing.assert_allclose(math.exp(lv), direct, rtol=1e-12)


def test_qbinomial_hand_value():
    # [4 2]_{1/2} = (15/16)(7/8) / ((1/2)(3/4))
    assert qbinomial(4, 2, 0.5) == pytest.approx(2.1875, rel=1e-15)


def test_qbinomial_out_of_range_is_zero():
    assert qbinomial(4, -1, 0.5) == 0.0
    assert qbinomial(4, 5, 0.5) == 0.0
    assert qbinomial(0, 0, 0.5) == 1.0


def test_log_qbinomial_matches():
    for m in range(0, 14):
        for k in range(0, m + 1):
            np.testing.assert_allclose(
                math.exp(log_qbinomial(m, k, 0.5)),
                qbinomial(m, k, 0.5),
                rtol=1e-13,
            )


def test_qbinomial_poly_hand_coeffs():
    # [4 2]_q = 1 + q + 2q^2 + q^3 + q^4
    assert qbinomial_poly(4, 2).coeffs == (1, 1, 2, 1, 1)
    assert qbinomial_poly(3, 1).coeffs == (1, 1, 1)
    assert qbinomial_poly(5, 0).coeffs == (1,)


def test_qbinomial_poly_matches_float():
    for m in range(0, 13):
        for k in range(0, m + 1):
            for q in (0.1, 0.5, 0.9):
                np.testing.assert_allclose(
                    qbinomial_poly(m, k)(q), qbinomial(m, k, q), rtol=1e-12
                )


def test_qbinomial_poly_symmetry():
    for m in range(0, 13):
        for k in range(0, m + 1):
            assert qbinomial_poly(m, k) == qbinomial_poly(m, m - k)


def test_q_pascal_exact():
    for m in range(1, 13):
        for k in range(0, m + 1):
            assert q_pascal_check(m, k)


def test_intpoly_arithmetic():
    p = IntPoly((1, 2))
    r = IntPoly((0, 1))
    assert (p * r).coeffs == (0, 1, 2)
    assert (p + r).coeffs == (1, 3)
    assert p.shift(2).coeffs == (0, 0, 1, 2)
    assert IntPoly((0, 0)).coeffs == ()
    assert p(2.0) == 5.0


def test_pochhammer_inversion_grid():
    for q in (0.1, 0.5, 0.9):
        for k in range(0, 21):
            lhs, rhs = pochhammer_inversion(k, q)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-10)


def test_shifted_pochhammer_ratio_points():
    for c, d, j, m_j, m_prev, q in [
        (0.0, 3, 2, 4, 1, 0.5),
        (1.5, 2, 2, 0, -5, 0.3),
        (-2.0, 4, 4, 7, 2, 0.9),
        (0.7, 3, 3, -1, -4, 0.5),
    ]:
        lhs, rhs = shifted_pochhammer_ratio(c, d, j, m_j, m_prev, q)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-11)


def test_jacobi_triple_product_points():
    for z, q in [(1.0, 0.5), (2.0, 0.5), (0.7, 0.8), (-0.5, 0.3), (4.0, 0.1)]:
        s, p = jacobi_triple_product(z, q)
        np.testing.assert_allclose(s, p, rtol=1e-11)


def test_jacobi_triple_product_rejects_zero():
    with pytest.raises(ValueError):
        jacobi_triple_product(0.0, 0.5)
