"""Exact q-series arithmetic, eta quotients and the theta/Eisenstein identities."""

import json
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from cmlvalues import qseries as qs
from cmlvalues.qseries import EtaQuotient, QSeries, QuotientParseError


# partition numbers p(0..14), the coefficients of 1/prod(1 - q^n)
PARTITIONS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135]
# Ramanujan tau(1..8)
RAMANUJAN_TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480]


def _r2(n: int) -> int:
    """Number of (x, y) in Z^2 with x^2 + y^2 = n, by direct count."""
    r = int(n ** 0.5) + 1
    return sum(1 for x in range(-r, r + 1) for y in range(-r, r + 1) if x * x + y * y == n)


def small_series():
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    return st.builds(lambda vals, off: QSeries.from_list(vals, offset=off, trunc=off + 8),
                     st.lists(coeff, min_size=1, max_size=8), st.integers(0, 2))


class TestArithmetic:
    def test_constant_and_monomial(self):
        one = QSeries.constant()
        assert one.is_exact and one.coeff(0) == 1
        m = QSeries.monomial(Fraction(1, 3), 5)
        assert m.denom == 3 and m.coeff(Fraction(1, 3)) == 5

    def test_truncation_of_product(self):
        a = QSeries.from_list([1, 1, 1], trunc=3)
        b = QSeries.from_list([0, 1, 2, 3], trunc=4)
        # valuation of b is 1, so a*b is known to min(3 + 1, 4 + 0)
        assert (a * b).trunc == 4

    def test_inverse_of_euler_product_is_partitions(self):
        euler = QSeries.from_list(qs._euler_product(15))
        inv = euler.inverse()
        assert [inv.coeff(n) for n in range(15)] == PARTITIONS

    def test_division_by_zero_series(self):
        with pytest.raises(ZeroDivisionError):
            QSeries.constant(1) / QSeries({}, 1, 5)

    def test_mixed_denominators_add(self):
        s = QSeries.monomial(Fraction(1, 2)) + QSeries.monomial(Fraction(1, 3))
        assert s.denom == 6
        assert s.coeff(Fraction(1, 2)) == 1 and s.coeff(Fraction(1, 3)) == 1

    def test_coefficient_beyond_truncation_raises(self):
        s = QSeries.from_list([1, 2], trunc=2)
        with pytest.raises(qs.InsufficientTruncation):
            s.coeff(5)

    def test_qderiv(self):
        s = QSeries.from_list([1, 2, 3])
        assert [s.qderiv().coeff(n) for n in range(3)] == [0, 2, 6]

    @settings(max_examples=40, deadline=None)
    @given(small_series(), small_series(), small_series())
    def test_product_is_associative(self, a, b, c):
        assert (a * b) * c == a * (b * c)

    @settings(max_examples=40, deadline=None)
    @given(small_series())
    def test_inverse_times_series_is_one(self, a):
        if not a.index_items():
            return
        assert a * a.inverse() == QSeries.constant(1)


class TestJson:
    def test_roundtrip(self):
        s = QSeries({1: Fraction(-3, 4), 4: 2}, 3, 9)
        d = s.to_json()
        assert d["denom"] == 3 and d["trunc"] == 9
        assert d["coeffs"] == [[1, "-3/4"], [4, "2/1"]]
        assert QSeries.from_json(json.loads(json.dumps(d))) == s

    def test_lowest_terms(self):
        d = QSeries({0: Fraction(4, 6)}).to_json()
        assert d["coeffs"][0][1] == "2/3"


class TestEtaQuotient:
    def test_eta_is_pentagonal(self):
        # prod(1 - q^n) = sum (-1)^k q^(k(3k-1)/2)
        s = QSeries.from_list(qs._euler_product(40))
        expected = {0: 1}
        for k in range(1, 6):
            expected[k * (3 * k - 1) // 2] = (-1) ** k
            expected[k * (3 * k + 1) // 2] = (-1) ** k
        assert all(s.coeff(n) == expected.get(n, 0) for n in range(40))

    def test_delta_is_ramanujan_tau(self):
        delta = EtaQuotient.of((1, 24)).expand(9)
        assert [delta.coeff(n) for n in range(1, 9)] == RAMANUJAN_TAU

    def test_eta_6t_4(self):
        s = EtaQuotient.parse("eta(6t)^4").expand(20)
        assert [s.coeff(n) for n in range(1, 8)] == [1, 0, 0, 0, 0, 0, -4]

    def test_zero_power_is_constant_one(self):
        s = EtaQuotient.parse("eta(1t)^0").expand(10)
        assert s.items() == [(0, 1)]

    def test_parse_rational_scales(self):
        f = EtaQuotient.parse("eta(1/2t)^-2 * eta(2t)^3")
        assert f.factors == ((Fraction(1, 2), -2), (Fraction(2), 3))

    @pytest.mark.parametrize("text,offset", [("eta(", 4), ("eta(2t", 6), ("eta(2t)^", 8), ("zeta(t)", 0)])
    def test_parse_error_offset(self, text, offset):
        with pytest.raises(QuotientParseError) as err:
            EtaQuotient.parse(text)
        assert err.value.offset == offset

    def test_weight_and_leading_exponent(self):
        f = EtaQuotient.of((4, 2), (8, 2))
        assert f.weight == 2 and f.leading_exponent == 1

    @pytest.mark.parametrize("name,level", [("f32", 32), ("g", 16), ("f36", 36), ("h3", 12), ("h4", 9)])
    def test_target_forms_are_self_dual(self, name, level):
        from cmlvalues.heckechar import NAMED_FORMS
        assert qs.fricke_transform(NAMED_FORMS[name].eta, level).self_dual

    def test_fricke_of_eta_is_sqrt_tau_over_i(self):
        # eta(-1/tau) = sqrt(tau/i) eta(tau)
        ft = qs.fricke_transform(EtaQuotient.of((1, 1)), 1)
        assert ft.constant_squared == 1
        with mpmath.workdps(30):
            tau = mpmath.mpc(0, "0.8")
            lhs = EtaQuotient.of((1, 1)).evaluate(-1 / tau, 30).value
            rhs = ft.prefactor(tau) * EtaQuotient.of((1, 1)).evaluate(tau, 30).value
            assert abs(lhs - rhs) < mpmath.mpf("1e-25")

    def test_numeric_evaluation_matches_mpmath(self):
        # eta(tau) = q^(1/24) qp(q) with q = e^(2 pi i tau)
        with mpmath.workdps(30):
            tau = mpmath.mpc("0.1", "0.9")
            q = mpmath.exp(2j * mpmath.pi * tau)
            ref = mpmath.exp(2j * mpmath.pi * tau / 24) * mpmath.qp(q)
            val = EtaQuotient.of((1, 1)).evaluate(tau, 30).value
            assert abs(val - ref) < mpmath.mpf("1e-25")


class TestThetaSeries:
    def test_theta3_squared_counts_sums_of_two_squares(self):
        t3 = qs.theta_expand(3, 1, 30)
        sq = t3 * t3
        assert all(sq.coeff(n) == _r2(n) for n in range(30))

    @pytest.mark.parametrize("which", [2, 3, 4])
    def test_eta_forms(self, which):
        o = Fraction(40)
        assert qs.theta_expand(which, 1, o) == qs.theta_from_eta(which, o)

    def test_jacobi_quartic(self):
        o = Fraction(40)
        t2, t3, t4 = (qs.theta_expand(w, 1, o) for w in (2, 3, 4))
        assert t3 ** 4 == t2 ** 4 + t4 ** 4

    def test_lambda_starts_with_16_q_half(self):
        lam = qs.lambda_expand(10)
        assert lam.items()[:2] == [(Fraction(1, 2), 16), (Fraction(1), -128)]

    def test_lambda_derivative(self):
        assert qs.lambda_derivative_check(30).ok
        assert qs.lambda_derivative_e2_check(30).ok

    def test_perturbed_lambda_rejected(self):
        bad = qs.lambda_expand(30) + QSeries.monomial(Fraction(7, 2))
        assert not qs.lambda_derivative_check(30, bad).ok

    @pytest.mark.parametrize("which", "abc")
    def test_cubic_theta_eta_forms(self, which):
        o = Fraction(30)
        assert qs.cubic_theta_expand(which, o) == qs.cubic_theta_from_eta(which, o)

    def test_borwein_cubic(self):
        o = Fraction(30)
        a, b, c = (qs.cubic_theta_expand(w, o) for w in "abc")
        assert a ** 3 == b ** 3 + c ** 3


class TestEisenstein:
    def test_e2_coefficients(self):
        e2 = qs.e2_expand(1, 6)
        assert [e2.coeff(n) for n in range(6)] == [1, -24, -72, -96, -168, -144]

    def test_weight_one_series_is_phi_over_six(self):
        spec = qs.eisenstein_expand(1, 20)
        phi, _ = qs.phi_expand(20)
        # G1 = -2 pi i (1/6 + sum ...), and phi = 1 + 6 sum ..., so the normalized series is phi/6
        assert spec.normalized() == phi.scale(Fraction(1, 6))

    def test_phi_is_a_theta(self):
        # phi(q) = sum over x^2 + xy + y^2
        phi, _ = qs.phi_expand(20)
        r = 6
        count = [0] * 20
        for x in range(-r, r + 1):
            for y in range(-r, r + 1):
                n = x * x + x * y + y * y
                if n < 20:
                    count[n] += 1
        assert [phi.coeff(n) for n in range(20)] == count

    @pytest.mark.parametrize("k", range(1, 12))
    def test_polynomial_identity(self, k):
        assert qs.sebbar_identity_check(k, 30).ok

    def test_t_relation(self):
        o = Fraction(30)
        phi, phi1 = qs.phi_expand(o)
        assert phi == (qs.t_expand(o + 1) + 3) * phi1

    @pytest.mark.parametrize("bad", [0, -2])
    def test_rejects_nonpositive_weight(self, bad):
        with pytest.raises(ValueError):
            qs.eisenstein_expand(bad, 10)

    def test_rejects_other_residue_classes(self):
        with pytest.raises(ValueError, match="unsupported residue class"):
            qs.eisenstein_expand(3, 10, residue=2, level=5)


class TestEvaluation:
    def test_truncation_too_short_raises(self):
        f = EtaQuotient.of((1, 24)).expand(3)
        with pytest.raises(qs.InsufficientTruncation):
            qs.evaluate_series(f, mpmath.mpc(0, "0.05"), 30)

    def test_series_value_of_delta(self):
        with mpmath.workdps(30):
            tau = mpmath.mpc(0, 1)
            f = EtaQuotient.of((1, 24))
            v = qs.evaluate_series(f.expand(80), tau, 30)
            assert abs(v.value - f.evaluate(tau, 30).value) < mpmath.mpf("1e-28")
