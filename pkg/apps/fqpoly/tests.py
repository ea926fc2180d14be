import itertools

import numpy as np
from django.test import SimpleTestCase, tag

from apps.ffield.field import field_make

from .dense import PolynomialError, gf_odd_part, gf_sqf_list
from .enumeration import (
    enumerate_monic,
    irreducible_count,
    poly_from_rank,
    poly_rank,
    random_monic,
)
from .parsing import PolynomialSyntaxError, poly_format, poly_parse
from .poly import (
    DEG_ZERO,
    FieldMismatchError,
    Poly,
    discriminant,
    factor_degrees,
    is_irreducible,
    is_squarefree,
    poly_gcd,
    poly_powmod,
    radical,
    resultant,
)

F3 = field_make(3)
F5 = field_make(5)
F7 = field_make(7)
F9 = field_make(3, 2)


def P(text, field):
    return poly_parse(text, field)


def monic_polys(field, max_degree):
    for n in range(1, max_degree + 1):
        yield from enumerate_monic(field, n)


class ParsingTests(SimpleTestCase):
    def test_examples(self):
        self.assertEqual(P('t^2+2*t+1', F3).coeffs, (1, 2, 1))
        self.assertEqual(P('t^2+4', F3).coeffs, (1, 0, 1))

    def test_syntax_error_position(self):
        with self.assertRaises(PolynomialSyntaxError) as ctx:
            P('t^^2', F3)
        self.assertEqual(ctx.exception.position, 2)

    def test_mixed_variables(self):
        with self.assertRaises(PolynomialSyntaxError):
            P('t+U', F5)

    def test_minus_folds_into_coefficients(self):
        f = P('t^2-1', F5)
        self.assertEqual(f.coeffs, (4, 0, 1))
        self.assertEqual(poly_format(f), 't^2+4')

    def test_zero_and_u_variable(self):
        self.assertTrue(P('0', F7).is_zero)
        self.assertEqual(poly_format(P('0', F7)), '0')
        self.assertEqual(P('3*U+1', F7).coeffs, (1, 3))

    def test_extension_coefficients(self):
        f = P('t^2+(1,2)*t+(0,2)', F9)
        self.assertEqual(poly_format(f), 't^2+(1,2)*t+2')
        with self.assertRaises(PolynomialError):
            P('(1,2)*t', F5)

    def test_round_trip(self):
        for field in (F3, F9):
            for f in monic_polys(field, 2):
                for g in (f, f * 2, f - f.coeff(0)):
                    self.assertEqual(P(poly_format(g), field), g)


class ArithmeticTests(SimpleTestCase):
    def test_degree_of_zero(self):
        zero = Poly(F5)
        self.assertEqual(zero.degree, DEG_ZERO)
        self.assertEqual((zero * P('t', F5)).degree, DEG_ZERO)

    def test_field_mismatch(self):
        with self.assertRaises(FieldMismatchError):
            P('t', F3) + P('t', F5)

    def test_divmod(self):
        f, g = P('t^3+2*t+1', F5), P('t^2+3', F5)
        quo, rem = divmod(f, g)
        self.assertEqual(quo * g + rem, f)
        self.assertLess(rem.degree, g.degree)

    def test_shift_and_evaluate(self):
        f = P('t^3+t+1', F7)
        g = f.shift(2)
        for x in range(7):
            self.assertEqual(g(x), f(x + 2))

    def test_gcd_examples(self):
        self.assertEqual(poly_gcd(P('t^2-1', F5), P('t-1', F5)), P('t-1', F5))
        self.assertEqual(poly_gcd(P('t^2+1', F3), P('t^2+t+2', F3)), P('1', F3))
        self.assertEqual(poly_gcd(Poly(F3), P('2*t+2', F3)), P('t+1', F3))

    def test_powmod_examples(self):
        m = P('t^2+1', F3)
        self.assertEqual(poly_powmod(P('t', F3), 3, m), P('2*t', F3))
        self.assertEqual(poly_powmod(P('t', F3), 1, m), P('t', F3))
        self.assertTrue(poly_powmod(Poly(F3), 5, m).is_zero)
        with self.assertRaises(PolynomialError):
            poly_powmod(P('t', F3), 2, P('2', F3))


class ResultantTests(SimpleTestCase):
    def test_examples(self):
        for a, b in [(1, 3), (4, 0), (2, 2)]:
            res = resultant(P(f't+{5 - a}', F5), P(f't+{5 - b}', F5))
            self.assertEqual(res, F5.element(a - b))
        self.assertEqual(resultant(P('t^2+1', F3), P('t', F3)), F3.one)
        self.assertEqual(resultant(P('t^2-1', F5), P('t-1', F5)), F5.zero)
        with self.assertRaises(PolynomialError):
            resultant(Poly(F5), P('t', F5))

    def test_symmetry_and_common_factors_exhaustive(self):
        polys = list(monic_polys(F3, 2))
        for f, g in itertools.product(polys, repeat=2):
            sign = -1 if f.degree * g.degree % 2 else 1
            self.assertEqual(resultant(f, g), resultant(g, f) * sign)
            self.assertEqual(resultant(f, g) == F3.zero, poly_gcd(f, g).degree >= 1)

    def test_symmetry_random(self):
        rng = np.random.default_rng(11)
        for field in (F5, F9, field_make(13)):
            for _ in range(300):
                f = random_monic(field, int(rng.integers(1, 5)), rng)
                g = random_monic(field, int(rng.integers(1, 5)), rng)
                sign = -1 if f.degree * g.degree % 2 else 1
                self.assertEqual(resultant(f, g), resultant(g, f) * sign)
                self.assertEqual(resultant(f, g) == field.zero, poly_gcd(f, g).degree >= 1)


class DiscriminantTests(SimpleTestCase):
    def test_quadratic_formula(self):
        for b, c in itertools.product(range(7), repeat=2):
            f = Poly(F7, [c, b, 1])
            self.assertEqual(discriminant(f), F7.element(b * b - 4 * c))

    def test_examples(self):
        self.assertEqual(discriminant(P('t^2+1', F3)), F3.element(2))
        self.assertEqual(discriminant(P('t+3', F5)), F5.one)
        self.assertEqual(discriminant(P('t^3', F3)), F3.zero)
        with self.assertRaises(PolynomialError):
            discriminant(P('2', F3))

    def test_product_rule(self):
        rng = np.random.default_rng(3)
        for field in (F5, F7, F9):
            for _ in range(200):
                f = random_monic(field, int(rng.integers(1, 4)), rng)
                g = random_monic(field, int(rng.integers(1, 4)), rng)
                if poly_gcd(f, g).degree >= 1:
                    continue
                res = resultant(f, g)
                self.assertEqual(discriminant(f * g), discriminant(f) * discriminant(g) * res * res)


class FactorisationTests(SimpleTestCase):
    def test_squarefree_examples(self):
        self.assertFalse(is_squarefree(P('t^2-2*t+1', F5)))
        self.assertTrue(is_squarefree(P('t^2+1', F3)))
        self.assertFalse(is_squarefree(P('t^3', F3)))
        self.assertTrue(is_squarefree(P('2', F3)))
        with self.assertRaises(PolynomialError):
            is_squarefree(Poly(F3))

    def test_irreducible_examples(self):
        self.assertTrue(is_irreducible(P('t^2+1', F3)))
        self.assertFalse(is_irreducible(P('t^2-1', F3)))
        self.assertTrue(is_irreducible(P('t+5', F7)))
        with self.assertRaises(PolynomialError):
            is_irreducible(P('1', F7))

    def test_factor_degrees_examples(self):
        self.assertEqual(factor_degrees(P('t^3-t', F3)), (1, 1, 1))
        self.assertEqual(factor_degrees(P('t^2+1', F3) * P('t+1', F3)), (1, 2))
        self.assertEqual(factor_degrees(P('t^2+1', F3)), (2,))
        with self.assertRaises(PolynomialError):
            factor_degrees(P('t^2', F3))
        self.assertEqual(factor_degrees(P('t^2', F3), radical_first=True), (1,))

    def test_irreducible_iff_single_factor(self):
        for field, n in [(F3, 4), (F5, 3), (F9, 2), (field_make(2), 6), (field_make(11), 3)]:
            for f in enumerate_monic(field, n):
                if not is_squarefree(f):
                    self.assertFalse(is_irreducible(f))
                    continue
                degrees = factor_degrees(f)
                self.assertEqual(sum(degrees), n)
                self.assertEqual(is_irreducible(f), degrees == (n,))

    def test_radical(self):
        f = P('t+1', F3)**3 * P('t^2+1', F3)**2 * P('t', F3)
        self.assertEqual(radical(f), P('t+1', F3) * P('t^2+1', F3) * P('t', F3))

    def test_squarefree_decomposition(self):
        f = P('t+1', F3)**3 * P('t+2', F3)**2 * P('t', F3) * P('t^2+1', F3)**5
        factors = gf_sqf_list(F3, list(f.coeffs))
        rebuilt = Poly(F3, [1])
        for g, e in factors:
            rebuilt = rebuilt * Poly(F3, g)**e
        self.assertEqual(rebuilt, f)
        odd = Poly(F3, gf_odd_part(F3, list(f.coeffs)))
        self.assertEqual(odd, P('t+1', F3) * P('t', F3) * P('t^2+1', F3))


class CountingTests(SimpleTestCase):
    def test_irreducible_count_examples(self):
        self.assertEqual(irreducible_count(7, 1), 7)
        self.assertEqual(irreducible_count(3, 2), 3)
        self.assertEqual(irreducible_count(2, 3), 2)
        with self.assertRaises(PolynomialError):
            irreducible_count(3, 0)

    def test_enumeration_examples(self):
        self.assertEqual([poly_format(f) for f in enumerate_monic(F3, 1)], ['t', 't+1', 't+2'])
        self.assertEqual(len(list(enumerate_monic(F3, 2))), 9)
        even = set(enumerate_monic(F3, 2, (0, 2)))
        odd = set(enumerate_monic(F3, 2, (1, 2)))
        self.assertFalse(even & odd)
        self.assertEqual(even | odd, set(enumerate_monic(F3, 2)))
        with self.assertRaises(PolynomialError):
            list(enumerate_monic(F3, 2, (2, 2)))

    def test_rank_bijection(self):
        for rank, f in enumerate(enumerate_monic(F9, 2)):
            self.assertEqual(poly_rank(f), rank)
            self.assertEqual(poly_from_rank(F9, 2, rank), f)

    def test_necklace_matches_enumeration(self):
        for field, n in [(F3, 2), (F3, 3), (F5, 2), (F5, 3), (F9, 2), (field_make(2), 5), (F7, 3)]:
            found = sum(1 for f in enumerate_monic(field, n) if is_irreducible(f))
            self.assertEqual(found, irreducible_count(field.q, n), msg=f"{field} n={n}")

    @tag('slow')
    def test_necklace_matches_enumeration_large(self):
        for q, k, n in [(3, 1, 10), (5, 1, 7), (7, 1, 5), (3, 2, 5), (11, 1, 4), (31, 1, 3)]:
            field = field_make(q, k)
            found = sum(1 for f in enumerate_monic(field, n) if is_irreducible(f))
            self.assertEqual(found, irreducible_count(field.q, n))
