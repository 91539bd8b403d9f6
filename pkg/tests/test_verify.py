from fractions import Fraction

import pytest

from aseplab.qseries import pochhammer_finite, pochhammer_infinite
from aseplab.verify import (
    IdentityReport,
    verify_durfee,
    verify_durfee_exact,
    verify_euler,
    verify_euler_exact,
    verify_jacobi,
    verify_qbinomial,
    verify_qbinomial_exact,
)


class TestIdentityReport:
    def test_pass_fail_logic(self):
        bad = IdentityReport("x", {}, lhs=1.0, rhs=1.0 + 1e-6, tol=1e-10)
        assert not bad.passed
        assert bad.rel_dev == pytest.approx(1e-6, rel=1e-3)
        excused = IdentityReport(
            "x", {}, lhs=1.0, rhs=1.0 + 1e-6, tol=1e-10, trunc_bound=1e-5
        )
        assert excused.passed

    def test_summary_line(self):
        r = IdentityReport("demo", {"q": 0.5}, lhs=2.0, rhs=2.0, tol=1e-10)
        assert r.summary().startswith("PASS demo [q=0.5]")
        r = IdentityReport("demo", {"q": 0.5}, lhs=2.0, rhs=3.0, tol=1e-10)
        assert r.summary().startswith("FAIL")


class TestDurfeeNumeric:
    def test_center_offset(self):
        r = verify_durfee(0.5, 0)
        assert r.passed
        assert r.rel_dev < 1e-12

    def test_slow_q(self):
        r = verify_durfee(0.9, 3)
        assert r.passed
        assert r.rel_dev < 1e-8

    def test_negative_offset_sum_starts_at_minus_n(self):
        # independent partial sum with explicit k range
        q, n = 0.5, -2
        acc = 0.0
        for k in range(2, 40):
            acc += q ** (k * (n + k)) / (
                pochhammer_finite(q, q, n + k) * pochhammer_finite(q, q, k)
            )
        r = verify_durfee(q, n)
        assert r.rhs == pytest.approx(acc, rel=1e-12)
        assert r.lhs == pytest.approx(1.0 / pochhammer_infinite(q, q)[0], rel=1e-14)
        assert r.passed

    def test_q_out_of_range(self):
        with pytest.raises(ValueError):
            verify_durfee(1.5, 0)


class TestEulerNumeric:
    def test_z_zero_trivial(self):
        r = verify_euler(0.5, 0.0)
        assert r.lhs == 1.0 and r.rhs == 1.0 and r.passed

    def test_reference_point(self):
        assert verify_euler(0.5, 1.0).passed

    def test_blocking_normalizer_argument(self):
        # the z that renormalizes the half-infinite particle-count law
        q, c, m = 0.5, 0.7, -2
        r = verify_euler(q, q ** (c - m))
        assert r.passed
        assert r.rel_dev < 1e-12

    def test_rational_partial_sum_oracle(self):
        q = Fraction(1, 2)
        acc = Fraction(0)
        term = Fraction(1)
        for k in range(0, 26):
            if k:
                term *= q ** (k - 1) / (1 - q**k)
            acc += term
        r = verify_euler(0.5, 1.0)
        assert r.rhs == pytest.approx(float(acc), rel=1e-13)

    @pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
    def test_grid(self, q):
        assert verify_euler(q, 0.7).passed


class TestQBinomialNumeric:
    def test_trivial_sizes(self):
        r0 = verify_qbinomial(0.5, 0.8, 0)
        assert r0.lhs == 1.0 and r0.rhs == 1.0 and r0.passed
        r1 = verify_qbinomial(0.5, 0.8, 1)
        assert r1.lhs == pytest.approx(1.8) and r1.passed

    def test_window_normalizer_argument(self):
        q, c, m2, mhat = 0.5, 0.3, 2, 4
        r = verify_qbinomial(q, q ** (c + 1 - m2), mhat)
        assert r.passed and r.rel_dev < 1e-13

    @pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
    @pytest.mark.parametrize("m", [2, 5, 9])
    def test_grid(self, q, m):
        assert verify_qbinomial(q, 1.3, m).passed


class TestJacobiNumeric:
    @pytest.mark.parametrize("z,q", [(1.0, 0.5), (2.0, 0.5), (0.7, 0.8), (4.0, 0.1)])
    def test_grid(self, z, q):
        r = verify_jacobi(q, z)
        assert r.passed
        assert r.rel_dev < 1e-11


class TestExactSuites:
    def test_durfee_exact_offsets(self):
        for n in range(-3, 4):
            assert verify_durfee_exact(12, n)

    def test_euler_exact(self):
        assert verify_euler_exact(12, 4)

    def test_euler_exact_k_zero_column(self):
        assert verify_euler_exact(10, 0)

    def test_qbinomial_exact(self):
        for m in range(0, 9):
            assert verify_qbinomial_exact(m)
