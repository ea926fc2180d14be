import itertools

import numpy as np
from django.test import SimpleTestCase

from apps.ffield.field import field_make
from apps.fqpoly.parsing import poly_parse
from apps.fqpoly.poly import Poly, discriminant

from .bipoly import BiPoly, BiPolyError, disc_in_t, evaluate_at_U, specialize_family

F3 = field_make(3)


class SpecializeFamilyTests(SimpleTestCase):
    def test_assembly(self):
        F = specialize_family([F3.zero], Poly(F3), 2)
        self.assertEqual(str(F), 't^2+(U)')
        G = specialize_family([F3.one], poly_parse('t', F3), 2)
        self.assertEqual(str(G), 't^2+2*t+(U)')
        self.assertTrue(G.is_monic_t)

    def test_offset_degree_bound(self):
        with self.assertRaises(BiPolyError):
            specialize_family([F3.zero], poly_parse('t^2', F3), 2)

    def test_wrong_length(self):
        with self.assertRaises(BiPolyError):
            specialize_family([F3.zero, F3.one], Poly(F3), 2)

    def test_evaluate_at_u(self):
        F = specialize_family([F3.one], poly_parse('1', F3), 2)
        self.assertEqual(evaluate_at_U(F, 2), poly_parse('t^2+t', F3))


class DiscInTTests(SimpleTestCase):
    def test_quadratic_family(self):
        # t^2 + u t + U has discriminant u^2 - 4U
        F5 = field_make(5)
        for u in range(5):
            F = specialize_family([F5.element(u)], Poly(F5), 2)
            self.assertEqual(disc_in_t(F), Poly.from_ints(F5, [u * u, -4]))

    def test_t2_plus_u_over_f3(self):
        F = specialize_family([F3.zero], Poly(F3), 2)
        self.assertEqual(disc_in_t(F), poly_parse('2*U', F3))

    def test_rejects_degree_one_and_non_monic(self):
        F5 = field_make(5)
        linear = BiPoly(F5, [poly_parse('U', F5), Poly.from_ints(F5, [1])])
        with self.assertRaises(BiPolyError):
            disc_in_t(linear)
        non_monic = BiPoly(F5, [poly_parse('U', F5), Poly(F5), Poly.from_ints(F5, [2])])
        with self.assertRaises(BiPolyError):
            disc_in_t(non_monic)

    def test_evaluation_commutes_exhaustive(self):
        for p, k, n in [(3, 1, 2), (3, 1, 3), (5, 1, 3), (7, 1, 2), (3, 2, 2), (3, 1, 4), (5, 1, 4)]:
            field = field_make(p, k)
            offsets = [Poly(field), poly_parse('t+1', field)]
            space = list(itertools.product(range(field.q), repeat=n - 1))
            if len(space) > 125:
                space = space[::len(space) // 125]
            for codes in space:
                u = [field.from_code(c) for c in codes]
                for a in offsets:
                    F = specialize_family(u, a, n)
                    D = disc_in_t(F)
                    for c in field.elements():
                        self.assertEqual(D(c), discriminant(evaluate_at_U(F, c)),
                                         msg=f"{field} n={n} u={codes} a={a} c={c}")

    def test_degree_in_u(self):
        rng = np.random.default_rng(5)
        for p, n in [(7, 3), (11, 4), (13, 3)]:
            field = field_make(p)
            generic = 0
            for _ in range(30):
                u = [field.from_code(int(c)) for c in rng.integers(0, p, size=n - 1)]
                D = disc_in_t(specialize_family(u, Poly(field), n))
                self.assertLessEqual(D.degree, n - 1)
                generic += D.degree == n - 1
            self.assertGreater(generic, 20)
