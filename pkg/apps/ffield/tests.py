import pickle
import random

from django.test import SimpleTestCase

from .field import (
    FieldError,
    field_from_order,
    field_make,
    field_parse,
    field_pow,
    quadratic_character,
)

SMALL_ODD_FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (7, 2), (11, 1), (3, 3), (11, 2)]


class FieldConstructionTests(SimpleTestCase):
    def test_prime_field_has_no_modulus(self):
        F = field_make(3, 1)
        self.assertEqual(F.q, 3)
        self.assertIsNone(F.modulus)
        self.assertEqual(F.label, '3')

    def test_f9_uses_least_irreducible_quadratic(self):
        # t^2 is reducible, t^2 + 1 has no root mod 3
        F = field_make(3, 2)
        self.assertEqual(F.modulus, (1, 0, 1))
        self.assertEqual(F.label, '3^2')

    def test_f4_modulus(self):
        self.assertEqual(field_make(2, 2).modulus, (1, 1, 1))

    def test_construction_is_deterministic(self):
        self.assertIs(field_make(5, 3), field_make(5, 3))
        self.assertEqual(field_make(5, 3).modulus, field_parse('5^3').modulus)

    def test_default_degree_is_the_same_field(self):
        for p in (5, 7, 101):
            self.assertIs(field_make(p), field_make(p, 1))
            self.assertIs(field_parse(str(p)), field_make(p))
        self.assertEqual(field_make(7).one + field_make(7, 1).one, field_make(7).element(2))
        self.assertIs(pickle.loads(pickle.dumps(field_make(11))), field_make(11, 1))

    def test_invalid_arguments(self):
        with self.assertRaises(FieldError):
            field_make(4, 1)
        with self.assertRaises(FieldError):
            field_make(3, 0)
        with self.assertRaises(FieldError):
            field_make(2, 32)
        with self.assertRaises(FieldError):
            field_parse('9^x')

    def test_field_from_order(self):
        self.assertIs(field_from_order(27), field_make(3, 3))
        with self.assertRaises(FieldError):
            field_from_order(12)

    def test_pickle_returns_same_field(self):
        F = field_make(7, 2)
        self.assertIs(pickle.loads(pickle.dumps(F)), F)


class FieldArithmeticTests(SimpleTestCase):
    def test_pow_examples(self):
        F = field_make(5)
        self.assertEqual(field_pow(F.element(2), 4), F.one)
        self.assertEqual(field_pow(F.element(2), 3), F.element(3))
        self.assertEqual(field_pow(F.zero, 0), F.one)

    def test_inverse_exhaustive(self):
        for p, k in SMALL_ODD_FIELDS + [(2, 3), (2, 4)]:
            F = field_make(p, k)
            for a in F.elements():
                if a:
                    self.assertEqual(a * field_pow(a, F.q - 2), F.one, msg=f"{F} {a}")
                    self.assertEqual(a / a, F.one)

    def test_inverse_of_zero(self):
        F = field_make(3, 2)
        with self.assertRaises(FieldError):
            F.one / F.zero

    def test_ring_axioms_on_samples(self):
        rng = random.Random(7)
        for p, k in SMALL_ODD_FIELDS:
            F = field_make(p, k)
            elems = list(F.elements())
            for _ in range(200):
                a, b, c = rng.choice(elems), rng.choice(elems), rng.choice(elems)
                self.assertEqual(a + b, b + a)
                self.assertEqual(a * b, b * a)
                self.assertEqual((a + b) + c, a + (b + c))
                self.assertEqual((a * b) * c, a * (b * c))
                self.assertEqual(a * (b + c), a * b + a * c)
                self.assertEqual(a - b + b, a)
            self.assertEqual(F.one * p, F.zero)

    def test_extension_without_tables_matches_tables(self):
        F = field_make(3, 3)
        products = {(a, b): (F.mul(a, b), F.add(a, b)) for a in range(F.q) for b in range(F.q)}
        with self.settings(HLLAB_TABLE_LIMIT=1):
            G = type(F)(3, 3, F.modulus)
            for (a, b), expected in products.items():
                self.assertEqual((G.mul(a, b), G.add(a, b)), expected)
            self.assertIsNone(G._exp)

    def test_element_from_coordinates(self):
        F = field_make(3, 2)
        x = F.element((0, 1))
        self.assertEqual(x.repr, (0, 1))
        self.assertEqual(x * x, F.element(-1))
        self.assertEqual(str(x), '(1,0)')


class QuadraticCharacterTests(SimpleTestCase):
    def test_examples(self):
        F5, F7 = field_make(5), field_make(7)
        self.assertEqual(quadratic_character(F5.element(1)), 1)
        self.assertEqual(quadratic_character(F7.zero), 0)
        self.assertEqual(quadratic_character(F5.element(2)), -1)

    def test_even_characteristic_is_rejected(self):
        with self.assertRaises(FieldError):
            quadratic_character(field_make(2, 2).one)

    def test_multiplicative(self):
        for p, k in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (7, 2)]:
            F = field_make(p, k)
            for a in F.elements():
                for b in F.elements():
                    self.assertEqual(quadratic_character(a * b),
                                     quadratic_character(a) * quadratic_character(b))

    def test_half_of_units_are_squares(self):
        for p, k in SMALL_ODD_FIELDS:
            F = field_make(p, k)
            squares = sum(1 for a in F.elements() if quadratic_character(a) == 1)
            self.assertEqual(squares, (F.q - 1) // 2)

    def test_table_agrees_with_euler_criterion(self):
        F = field_make(11, 2)
        chi = F.character_table()
        for a in range(1, F.q):
            euler = F.pow(a, (F.q - 1) // 2)
            self.assertEqual(chi[a], 1 if euler == 1 else -1)
