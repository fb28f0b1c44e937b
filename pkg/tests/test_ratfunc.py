"""Exact polynomial and rational-function arithmetic."""

import random
from fractions import Fraction

import pytest

from zetacount import (
    InputSyntaxError,
    Poly,
    RationalFunction,
    format_poly,
    has_p_power_denominator,
    parse_rational,
    poly_gcd,
    poly_xgcd,
)


def F(a, b=1):
    return Fraction(a, b)


class TestPolyArithmetic:
    def test_difference_of_squares(self):
        assert Poly([1, 1]) * Poly([1, -1]) == Poly([1, 0, -1])

    def test_multiplication_annihilator(self):
        a = Poly([3, 0, F(1, 2)])
        assert a * Poly.zero() == Poly.zero()
        assert (a * Poly.zero()).is_zero

    def test_factor_product_at_p2(self):
        # (1 - p^-5 t^6)(1 - p^-1 t) at p = 2, expanded by hand
        a = Poly([1, 0, 0, 0, 0, 0, F(-1, 32)])
        b = Poly([1, F(-1, 2)])
        expected = Poly([1, F(-1, 2), 0, 0, 0, 0, F(-1, 32), F(1, 64)])
        assert a * b == expected

    def test_degree_bookkeeping(self):
        rng = random.Random(11)
        for _ in range(50):
            a = Poly([rng.randint(-5, 5) for _ in range(rng.randint(1, 6))] + [1])
            b = Poly([rng.randint(-5, 5) for _ in range(rng.randint(1, 6))] + [1])
            assert (a * b).degree == a.degree + b.degree

    def test_ring_axioms_random(self):
        rng = random.Random(23)

        def rand_poly():
            return Poly([F(rng.randint(-9, 9), rng.randint(1, 9))
                         for _ in range(rng.randint(0, 6))])

        for _ in range(60):
            a, b, c = rand_poly(), rand_poly(), rand_poly()
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert a + b == b + a
            assert a * b == b * a


class TestDivRem:
    def test_t2_plus_1_by_t(self):
        q, r = divmod(Poly([1, 0, 1]), Poly([0, 1]))
        assert q == Poly([0, 1])
        assert r == Poly([1])

    def test_self_division(self):
        a = Poly([F(1, 3), 2, 0, -5])
        q, r = divmod(a, a)
        assert q == Poly.one()
        assert r.is_zero

    def test_high_power_by_leading_term(self):
        # t^7 / (1 - t^6/2): q = -2t, r = 2t, checked by re-multiplication
        a = Poly.monomial(7)
        b = Poly([1, 0, 0, 0, 0, 0, F(-1, 2)])
        q, r = divmod(a, b)
        assert q == Poly([0, -2])
        assert r == Poly([0, 2])
        assert q * b + r == a

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            divmod(Poly([1]), Poly.zero())

    def test_reconstruction_random(self):
        rng = random.Random(5)
        for _ in range(60):
            a = Poly([rng.randint(-9, 9) for _ in range(rng.randint(0, 8))])
            b = Poly([rng.randint(-9, 9) for _ in range(rng.randint(1, 5))] + [1])
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.degree < b.degree


class TestGcd:
    def test_shared_root(self):
        g = poly_gcd(Poly([1, 0, -1]), Poly([1, -1]))
        assert g == Poly([-1, 1])  # monic: t - 1
        assert g.divides(Poly([1, 0, -1]))
        assert g.divides(Poly([1, -1]))

    def test_gcd_with_zero(self):
        a = Poly([2, 0, 4])
        g = poly_gcd(a, Poly.zero())
        assert g == a.monic()

    def test_both_zero_rejected(self):
        with pytest.raises(ValueError):
            poly_gcd(Poly.zero(), Poly.zero())

    def test_coprime_denominator_factors(self):
        # roots have distinct absolute values, so the factors are coprime
        a = Poly([1, 0, 0, 0, 0, 0, F(-1, 32)])
        b = Poly([1, F(-1, 2)])
        assert poly_gcd(a, b) == Poly.one()

    def test_gcd_divides_both_random(self):
        rng = random.Random(31)
        for _ in range(40):
            common = Poly([rng.randint(-3, 3) for _ in range(rng.randint(0, 3))] + [1])
            a = common * Poly([rng.randint(-3, 3) for _ in range(3)] + [1])
            b = common * Poly([rng.randint(-3, 3) for _ in range(2)] + [1])
            g = poly_gcd(a, b)
            assert g.divides(a) and g.divides(b)
            assert common.monic().divides(g)
            assert g.leading == 1

    def test_xgcd_identity(self):
        rng = random.Random(47)
        for _ in range(30):
            a = Poly([rng.randint(-4, 4) for _ in range(3)] + [1])
            b = Poly([rng.randint(-4, 4) for _ in range(2)] + [1])
            g, s, u = poly_xgcd(a, b)
            assert s * a + u * b == g
            assert g == poly_gcd(a, b)


class TestRationalFunction:
    def test_constant_term_readoff(self):
        r = RationalFunction(Poly([1, 0, F(1, 8)]), Poly([1, F(-1, 2)]))
        assert r(0) == 1

    def test_example1_value_at_zero(self):
        # P(t) = (-t^6 + p^4 t^2 - p^3 t^2 + p^6) / ((p^5 - t^6)(p - t)) at p = 2:
        # the value at t = 0 is p^6 / (p^5 * p) = 1 = M_0
        p = 2
        num = Poly([p**6, 0, p**4 - p**3, 0, 0, 0, -1])
        den = Poly([p**5, 0, 0, 0, 0, 0, -1]) * Poly([p, -1])
        r = RationalFunction(num, den)
        assert r(0) == 1

    def test_geometric_at_half(self):
        r = RationalFunction(Poly([1]), Poly([1, -1]))
        assert r(F(1, 2)) == 2

    def test_evaluation_at_pole(self):
        r = RationalFunction(Poly([1]), Poly([1, -1]))
        with pytest.raises(ZeroDivisionError):
            r(1)

    def test_canonicalization_idempotent(self):
        r = RationalFunction(Poly([2, 2]), Poly([2, 0, -2]))
        again = RationalFunction(r.numerator, r.denominator)
        assert again == r
        assert r.canonical

    def test_equal_functions_identical_canonical_forms(self):
        # (2 + 2t)/(2 - 2t^2) == 1/(1 - t) after reduction
        a = RationalFunction(Poly([2, 2]), Poly([2, 0, -2]))
        b = RationalFunction(Poly([1]), Poly([1, -1]))
        assert a == b
        assert a.numerator == b.numerator and a.denominator == b.denominator

    def test_cross_multiplication_equality_random(self):
        rng = random.Random(7)
        for _ in range(25):
            num = Poly([rng.randint(-5, 5) for _ in range(3)] + [1])
            den = Poly([1] + [rng.randint(-5, 5) for _ in range(3)])
            scale = Poly([rng.randint(1, 4), rng.randint(-3, 3)])
            a = RationalFunction(num, den)
            b = RationalFunction(num * scale, den * scale)
            assert a == b
            assert a.numerator * b.denominator == b.numerator * a.denominator

    def test_arithmetic(self):
        one_minus = RationalFunction(Poly([1]), Poly([1, -1]))
        t_over = RationalFunction(Poly([0, 1]), Poly([1, -1]))
        assert one_minus - t_over == RationalFunction(Poly([1, -1]), Poly([1, -1]))
        assert (one_minus * Poly([1, -1])) == RationalFunction(Poly([1]))

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunction(Poly([1]), Poly.zero())

    def test_degree(self):
        r = RationalFunction(Poly([1, 0, F(1, 8), 0, 0, 0, F(-1, 64)]),
                             Poly([1, F(-1, 2), 0, 0, 0, 0, F(-1, 32), F(1, 64)]))
        assert r.degree == -1


class TestRationalText:
    def test_parse_forms(self):
        assert parse_rational("3/4") == F(3, 4)
        assert parse_rational("-7") == -7
        assert parse_rational("+2/6") == F(1, 3)

    @pytest.mark.parametrize("bad", ["1.5", "1/0", "a", "1/-2", "", "1e3"])
    def test_parse_rejects(self, bad):
        with pytest.raises(InputSyntaxError):
            parse_rational(bad)

    def test_roundtrip(self):
        for q in (F(3, 4), F(-1, 64), F(5), F(0)):
            assert parse_rational(str(q)) == q

    def test_p_power_denominators(self):
        assert has_p_power_denominator(F(3, 8), 2)
        assert has_p_power_denominator(F(5), 2)
        assert not has_p_power_denominator(F(1, 6), 2)
        assert has_p_power_denominator(F(1, 6), 3) is False

    def test_format_poly(self):
        assert format_poly(Poly([1, 0, F(1, 8), 0, 0, 0, F(-1, 64)])) == \
            "1 + 1/8*t^2 - 1/64*t^6"
        assert format_poly(Poly.zero()) == "0"
        assert format_poly(Poly([0, -1])) == "-t"
