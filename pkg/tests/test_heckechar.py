"""Ideal enumeration, Grossencharacter coefficients and the eta-product oracle."""

from math import gcd

import pytest

from cmlvalues import heckechar as hc
from cmlvalues.heckechar import Field, GrossCharSpec


def _multiplicative(values, N):
    """``a(mn) = a(m) a(n)`` for coprime m, n with mn <= N."""
    a = lambda n: values[n - 1]
    return all(a(m * n) == a(m) * a(n) for m in range(2, N) for n in range(m + 1, N // m + 1)
               if gcd(m, n) == 1)


class TestSpec:
    def test_gaussian_powers(self):
        assert GrossCharSpec(Field.GAUSSIAN, 2).weight == 3
        with pytest.raises(ValueError):
            GrossCharSpec(Field.GAUSSIAN, 3)

    def test_eisenstein_range(self):
        GrossCharSpec(Field.EISENSTEIN, 11)
        with pytest.raises(ValueError):
            GrossCharSpec(Field.EISENSTEIN, 12)
        with pytest.raises(ValueError):
            GrossCharSpec(Field.EISENSTEIN, 0)

    @pytest.mark.parametrize("k,cond", [(1, "M2*M3"), (2, "M2"), (3, "M3"), (4, "M2"), (5, "M2*M3"), (6, "O_F")])
    def test_conductor_classes(self, k, cond):
        assert GrossCharSpec(Field.EISENSTEIN, k).conductor == cond

    def test_str(self):
        assert str(GrossCharSpec(Field.EISENSTEIN, 4)) == "chi^4"
        assert str(GrossCharSpec(Field.GAUSSIAN, 1)) == "psi"


class TestGaussianIdeals:
    def test_norm_one(self):
        g = hc.canonical_generators_gaussian(1)
        assert [(x.a, x.b) for x in g] == [(1, 0)]
        assert hc.psi_value(g[0]) == (1, 0)

    def test_norm_five(self):
        g = [x for x in hc.canonical_generators_gaussian(5) if x.norm == 5]
        assert sorted((x.a, x.b) for x in g) == [(1, -2), (1, 2)]
        total = [sum(c) for c in zip(*(hc.psi_value(x) for x in g))]
        assert total == [-2, 0]

    def test_one_generator_per_odd_ideal(self):
        # odd-norm ideals of Z[i] of norm n number r2(n)/4
        N = 200
        gens = hc.canonical_generators_gaussian(N)
        for n in range(1, N + 1, 2):
            r2 = sum(1 for x in range(-15, 16) for y in range(-15, 16) if x * x + y * y == n)
            assert sum(1 for g in gens if g.norm == n) == r2 // 4

    def test_inert_prime_sign(self):
        # a(9) of eta(4t)^2 eta(8t)^2 is -3
        assert hc.coefficients(GrossCharSpec(Field.GAUSSIAN, 1), 9)[9] == -3


class TestEisensteinIdeals:
    def test_norm_one(self):
        g = hc.canonical_generators_eisenstein(1)
        assert [(x.a, x.b) for x in g] == [(1, 0)]

    def test_parity_and_residue(self):
        for g in hc.canonical_generators_eisenstein(300):
            assert g.a % 3 == 1 and (g.a + g.b) % 2 == 1 and g.norm % 6 in (1, 5)

    def test_even_norms_carry_multiplicity_three(self):
        even = [g for g in hc.canonical_generators_eisenstein(100, include_even_norms=True) if g.norm % 2 == 0]
        assert even and all(g.multiplicity == 3 for g in even)
        assert {g.norm for g in even} >= {4, 16, 28}

    def test_lattice_route_needs_multiple_of_three(self):
        with pytest.raises(ValueError):
            hc.coefficients(GrossCharSpec(Field.EISENSTEIN, 2), 50, method="lattice")

    @pytest.mark.parametrize("k", [3, 6, 9])
    def test_lattice_route_equals_convolution(self, k):
        spec = GrossCharSpec(Field.EISENSTEIN, k)
        assert hc.coefficients(spec, 600, "lattice") == hc.coefficients(spec, 600)


class TestCoefficients:
    @pytest.mark.parametrize("name", sorted(hc.NAMED_FORMS))
    def test_equal_eta_product(self, name):
        r = hc.eta_equivalence(name, 500)
        assert r.ok, f"{name} differs at n={r.first_mismatch}"

    @pytest.mark.parametrize("k", range(1, 12))
    def test_multiplicative(self, k):
        seq = hc.coefficients(GrossCharSpec(Field.EISENSTEIN, k), 300)
        assert _multiplicative(seq.values, 300)

    def test_ramanujan_bound(self):
        # |a(p)| <= 2 p^(k/2) for chi^k
        k = 5
        seq = hc.coefficients(GrossCharSpec(Field.EISENSTEIN, k), 400)
        primes = [p for p in range(2, 401) if all(p % d for d in range(2, int(p ** 0.5) + 1))]
        assert all(seq[p] ** 2 <= 4 * p ** k for p in primes)

    def test_f36_known_values(self):
        # eta(6t)^4 = q - 4q^7 + 2q^13 + 8q^19 - 5q^25 - 4q^31 ...
        seq = hc.coefficients(GrossCharSpec(Field.EISENSTEIN, 1), 31)
        assert [seq[n] for n in (1, 7, 13, 19, 25, 31)] == [1, -4, 2, 8, -5, -4]

    def test_as_qseries(self):
        s = hc.coefficients(GrossCharSpec(Field.GAUSSIAN, 2), 20).as_qseries()
        assert s == hc.NAMED_FORMS["g"].eta.expand(21)

    def test_index_bounds(self):
        seq = hc.coefficients(GrossCharSpec(Field.GAUSSIAN, 1), 5)
        with pytest.raises(IndexError):
            seq[6]

    def test_unknown_form(self):
        with pytest.raises(ValueError, match="unknown form"):
            hc.form_spec("f99")


class TestCongruences:
    def test_all_hold(self):
        rep = hc.congruence_scan(400)
        assert rep.ok and [r.modulus for r in rep.results] == [3, 8, 9, 240]

    def test_perturbation_is_caught_at_its_index(self):
        rep = hc.congruence_scan(100, perturb={(3, 7): 1})
        assert not rep.ok and rep.results[0].first_violation == 7

    def test_multiple_of_modulus_is_invisible(self):
        assert hc.congruence_scan(100, perturb={(6, 13): 240}).ok
