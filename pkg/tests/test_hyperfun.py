"""Gamma, Beta and hypergeometric evaluation against mpmath and classical closed forms."""

from fractions import Fraction

import mpmath
import pytest

from cmlvalues import hyperfun as hf
from cmlvalues.hyperfun import PFQSpec

TOL = mpmath.mpf("1e-28")


def rel(x, y):
    return abs(x - y) / abs(y)


class TestGamma:
    def test_half(self):
        with mpmath.workdps(40):
            assert rel(hf.gamma(Fraction(1, 2)), mpmath.sqrt(mpmath.pi)) < TOL

    def test_integer(self):
        assert hf.gamma(5) == 24

    def test_quarter_product(self):
        with mpmath.workdps(40):
            v = hf.gamma(Fraction(1, 4)) * hf.gamma(Fraction(3, 4))
            assert rel(v, mpmath.sqrt(2) * mpmath.pi) < TOL

    @pytest.mark.parametrize("pole", [0, -1, -7])
    def test_poles(self, pole):
        with pytest.raises(ValueError, match="pole"):
            hf.gamma(pole)

    @pytest.mark.parametrize("a", [Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), "0.37"])
    def test_reflection(self, a):
        assert hf.reflection_residual(a) < TOL

    @pytest.mark.parametrize("a,m", [(Fraction(1, 4), 2), (Fraction(1, 3), 3), (Fraction(2, 5), 4)])
    def test_multiplication(self, a, m):
        assert hf.gamma_multiplication_residual(a, m) < TOL


class TestBeta:
    def test_unit(self):
        assert rel(hf.beta(1, 1), 1) < TOL

    def test_third_third_is_gamma_cube(self):
        with mpmath.workdps(40):
            expected = mpmath.sqrt(3) / (2 * mpmath.pi) * mpmath.gamma(mpmath.mpf(1) / 3) ** 3
            assert rel(hf.beta(Fraction(1, 3), Fraction(1, 3)), expected) < TOL

    @pytest.mark.parametrize("a,b", [(Fraction(1, 4), Fraction(1, 4)), (Fraction(1, 3), Fraction(1, 3)),
                                     (Fraction(1, 2), Fraction(1, 4))])
    def test_quadrature_agrees(self, a, b):
        assert rel(hf.beta_integral(a, b), hf.beta(a, b)) < TOL


class TestClosedForms:
    @pytest.mark.parametrize("d", [3, 4])
    def test_period_forms_agree(self, d):
        assert hf.chowla_selberg(d).spread() < TOL

    def test_gaussian_period_is_beta_half_quarter(self):
        assert rel(hf.chowla_selberg(4).value, hf.beta(Fraction(1, 2), Fraction(1, 4))) < TOL

    def test_unsupported_discriminant(self):
        with pytest.raises(ValueError):
            hf.chowla_selberg(7)

    def test_beta_constant_tag(self):
        c = hf.beta_constant(Fraction(1, 3), Fraction(1, 3))
        assert c.tag == "B(1/3,1/3)" and c.spread() < TOL


class TestSpec:
    def test_rejects_nonpositive_lower(self):
        with pytest.raises(ValueError):
            PFQSpec((1, 2), (-1,), Fraction(1, 2))

    def test_rejects_argument_outside_interval(self):
        with pytest.raises(ValueError):
            PFQSpec((1, 2), (3,), 2)

    def test_rejects_shape(self):
        with pytest.raises(ValueError):
            PFQSpec((1,), (3,), Fraction(1, 2))

    def test_divergent_at_one(self):
        with pytest.raises(hf.DivergenceError):
            hf.pfq(PFQSpec((Fraction(1, 2), Fraction(1, 2)), (1,), 1))

    def test_terminating_at_one(self):
        # Chu-Vandermonde: 2F1(-n, b; c; 1) = (c-b)_n / (c)_n
        v = hf.hyp([-3, Fraction(1, 2)], [2], 1)
        expected = mpmath.rf(mpmath.mpf(3) / 2, 3) / mpmath.rf(2, 3)
        assert rel(v, expected) < TOL


class TestHypergeometric:
    @pytest.mark.parametrize("x", ["0.1", "0.5", "0.9", "0.99"])
    def test_2f1_against_mpmath(self, x):
        a, b, c = Fraction(1, 3), Fraction(2, 3), Fraction(5, 4)
        with mpmath.workdps(45):
            ref = mpmath.hyp2f1(mpmath.mpf(1) / 3, mpmath.mpf(2) / 3, mpmath.mpf(5) / 4, mpmath.mpf(x))
        assert rel(hf.hyp([a, b], [c], Fraction(x)), ref) < TOL

    def test_complete_elliptic_integral(self):
        # 2F1(1/2,1/2;1;m) = 2K(m)/pi
        with mpmath.workdps(45):
            ref = 2 * mpmath.ellipk(mpmath.mpf("0.3")) / mpmath.pi
        half = Fraction(1, 2)
        assert rel(hf.hyp([half, half], [1], Fraction(3, 10)), ref) < TOL

    def test_3f2_against_mpmath(self):
        up = (Fraction(1, 3), Fraction(2, 3), Fraction(1, 2))
        with mpmath.workdps(45):
            ref = mpmath.hyp3f2(*(mpmath.mpf(u.numerator) / u.denominator for u in up), 1, 1, mpmath.mpf("0.5"))
        assert rel(hf.hyp(up, (1, 1), Fraction(1, 2)), ref) < TOL

    def test_gauss_against_extrapolated_series(self):
        spec = PFQSpec((Fraction(1, 6), Fraction(1, 3)), (1,), 1)
        gauss = hf.pfq_value(spec)
        series = hf.pfq_value(spec, method="series")
        assert gauss.method == "gauss" and series.method == "series+richardson"
        assert rel(series.value, gauss.value) < mpmath.mpf("1e-8")

    def test_extrapolation_against_dixon(self):
        # Dixon: 3F2(a,b,c;1+a-b,1+a-c;1) is a ratio of Gamma values
        a, b, c = Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)
        spec = PFQSpec((a, b, c), (1 + a - b, 1 + a - c), 1)
        G = lambda x: mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator)
        with mpmath.workdps(45):
            ref = (G(1 + a / 2) * G(1 + a - b) * G(1 + a - c) * G(1 + a / 2 - b - c)
                   / (G(1 + a) * G(1 + a / 2 - b) * G(1 + a / 2 - c) * G(1 + a - b - c)))
        v = hf.pfq_value(spec, method="series")
        assert v.method == "series+richardson"
        assert rel(v.value, ref) < mpmath.mpf("1e-20")

    def test_shared_parameter_cancels(self):
        spec = PFQSpec((Fraction(1, 2), Fraction(1, 2), 1), (1, Fraction(5, 4)), 1)
        v = hf.pfq_value(spec)
        assert v.method.startswith("cancel+")
        # 2F1(1/2,1/2;5/4;1) by Gauss
        G = mpmath.gamma
        with mpmath.workdps(45):
            ref = G(mpmath.mpf(5) / 4) * G(mpmath.mpf(1) / 4) / G(mpmath.mpf(3) / 4) ** 2
        assert rel(v.value, ref) < TOL

    @pytest.mark.parametrize("a,b,x", [(Fraction(1, 4), Fraction(1, 4), 0),
                                       (Fraction(1, 6), Fraction(1, 3), Fraction(1, 2)),
                                       (Fraction(1, 6), Fraction(1, 3), 1)])
    def test_clausen(self, a, b, x):
        assert hf.clausen_check(a, b, x)

    def test_clausen_detects_wrong_parameters(self):
        # the square of 2F1 with a different lower parameter is not the 3F2
        lhs = hf.hyp([Fraction(1, 6), Fraction(1, 3)], [Fraction(4, 3)], Fraction(1, 2)) ** 2
        _, rhs = hf.clausen_sides(Fraction(1, 6), Fraction(1, 3), Fraction(1, 2))
        assert rel(lhs, rhs) > mpmath.mpf("1e-6")

    @pytest.mark.parametrize("x", ["0.1", "0.5", "0.9"])
    def test_euler_integral(self, x):
        half = Fraction(1, 2)
        assert rel(hf.euler_integral(half, half, 1, x), hf.hyp([half, half], [1], Fraction(x))) < mpmath.mpf("1e-10")

    def test_euler_integral_preconditions(self):
        with pytest.raises(ValueError):
            hf.euler_integral(1, 2, 1, "0.5")

    def test_recursive_integral(self):
        spec = PFQSpec((Fraction(1, 2), Fraction(1, 2), 1), (1, Fraction(5, 4)), 1)
        assert rel(hf.recursive_integral(spec), hf.pfq(spec)) < mpmath.mpf("1e-25")
