import itertools
import math
from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase, tag

from apps.experiments.grid import grid_policy
from apps.ffield.field import field_make, field_parse
from apps.fqpoly.enumeration import enumerate_monic, random_monic
from apps.fqpoly.parsing import poly_parse
from apps.fqpoly.poly import Poly, factor_degrees, is_squarefree
from apps.hlcount.counting import BudgetExceededError, sample_hits
from apps.hlcount.tuples import build_tuple_spec

from .cycles import (
    CycleTypeError,
    JointCycleStats,
    cycle_type,
    finite_class_probability,
    format_cycle_type,
    joint_cycle_sample,
    merge_stats,
    parse_cycle_type,
    partitions,
    permutation_cycle_type,
    simulate_product_model,
    sn_class_probability,
)
from .independence import SampleSizeError, independence_test, minimum_samples, pool_small_cells
from .parity import (
    ParityError,
    sign_pattern_stats,
    square_class_count,
    square_class_independence,
    stickelberger_check,
)


class CycleTypeTests(SimpleTestCase):
    def test_sn_probabilities(self):
        self.assertEqual(sn_class_probability((1, 1, 1)), Fraction(1, 6))
        self.assertEqual(sn_class_probability((1, 2)), Fraction(1, 2))
        self.assertEqual(sn_class_probability((3,)), Fraction(1, 3))
        self.assertEqual(sn_class_probability((2, 2)), Fraction(1, 8))

    def test_probabilities_sum_to_one(self):
        for n in range(1, 7):
            self.assertEqual(sum(sn_class_probability(lam) for lam in partitions(n)), 1)

    def test_partitions(self):
        self.assertEqual(partitions(3), ((1, 1, 1), (1, 2), (3,)))
        self.assertEqual(len(partitions(4)), 5)
        self.assertEqual(len(partitions(6)), 11)

    def test_text_form(self):
        self.assertEqual(format_cycle_type((1, 2)), '1+2')
        self.assertEqual(parse_cycle_type('2+1'), (1, 2))
        with self.assertRaises(CycleTypeError):
            cycle_type((1, 0))
        with self.assertRaises(CycleTypeError):
            cycle_type((1, 2), n=4)

    def test_finite_probabilities(self):
        for q, n in [(3, 2), (5, 3), (7, 4), (9, 3), (101, 3)]:
            self.assertEqual(sum(finite_class_probability(lam, q) for lam in partitions(n)), 1)
        self.assertEqual(finite_class_probability((1, 1, 1), 101), Fraction(99, 606))
        self.assertEqual(finite_class_probability((3,), 101), Fraction(102, 303))

    def test_finite_probabilities_approach_sn(self):
        for lam in partitions(4):
            gap = abs(finite_class_probability(lam, 10007) - sn_class_probability(lam))
            self.assertLess(gap, Fraction(2, 10007))

    def test_finite_probabilities_match_enumeration(self):
        F = field_make(5)
        counts = {lam: 0 for lam in partitions(3)}
        for f in enumerate_monic(F, 3):
            if is_squarefree(f):
                counts[factor_degrees(f)] += 1
        total = sum(counts.values())
        for lam, c in counts.items():
            self.assertEqual(Fraction(c, total), finite_class_probability(lam, 5))

    def test_permutation_cycle_type(self):
        self.assertEqual(permutation_cycle_type([1, 0, 2]), (1, 2))
        self.assertEqual(permutation_cycle_type([1, 2, 0]), (3,))
        self.assertEqual(permutation_cycle_type([0, 1, 2, 3]), (1, 1, 1, 1))


class StickelbergerTests(SimpleTestCase):
    def test_exhaustive_small_fields(self):
        for p, k, n in [(3, 1, 2), (3, 1, 3), (5, 1, 3), (3, 2, 2), (7, 1, 3), (3, 1, 4), (5, 1, 4)]:
            F = field_make(p, k)
            for f in enumerate_monic(F, n):
                if is_squarefree(f):
                    self.assertTrue(stickelberger_check(f), msg=f"{F} {f}")

    def test_scalar_multiple(self):
        F = field_make(7)
        self.assertTrue(stickelberger_check(poly_parse('3*t^3+t+1', F)))

    def test_errors(self):
        with self.assertRaises(ParityError):
            stickelberger_check(poly_parse('t^2+t+1', field_make(2)))
        with self.assertRaises(ParityError):
            stickelberger_check(poly_parse('t^2', field_make(5)))
        with self.assertRaises(ParityError):
            stickelberger_check(poly_parse('2', field_make(5)))

    @tag('slow')
    def test_exhaustive_to_ten_thousand(self):
        for label in grid_policy(100):
            F = field_parse(label)
            n = 2
            while F.q**n <= 10**4:
                for f in enumerate_monic(F, n):
                    if is_squarefree(f):
                        self.assertTrue(stickelberger_check(f), msg=f"{F} {f}")
                n += 1

    @tag('slow')
    def test_random_draws(self):
        rng = np.random.default_rng(101)
        for F in (field_make(101), field_make(3, 4)):
            checked = 0
            while checked < 10**4:
                f = random_monic(F, int(rng.integers(2, 7)), rng)
                if is_squarefree(f):
                    self.assertTrue(stickelberger_check(f), msg=f"{F} {f}")
                    checked += 1


class JointCycleSampleTests(SimpleTestCase):
    def test_linear_tuples_split_completely(self):
        stats = joint_cycle_sample(build_tuple_spec('7', 1, '0,1,2'), 200, 3)
        self.assertEqual(stats.total, 200)
        self.assertEqual(stats.discarded, 0)
        self.assertEqual(set(stats.counts), {((1,), (1,), (1,))})

    def test_all_irreducible_cell_matches_hit_count(self):
        spec = build_tuple_spec('13', 3, '0,1')
        stats = joint_cycle_sample(spec, 1000, 9)
        self.assertEqual(stats.counts[((3,), (3,))], sample_hits(spec, 1000, 9))
        self.assertEqual(stats.total + stats.discarded, 1000)
        self.assertEqual(sum(stats.marginal(0).values()), stats.total)

    def test_discarded_fraction_is_order_one_over_q(self):
        samples = 5000
        for q in (7, 31):
            stats = joint_cycle_sample(build_tuple_spec(str(q), 3, '0,1'), samples, q)
            self.assertLessEqual(stats.discarded / samples, 3 / q, msg=f"q={q}")
            self.assertGreater(stats.discarded, 0)

    def test_record(self):
        stats = JointCycleStats(n=3, r=2)
        stats.add(((1, 2), (3,)), 4)
        record = stats.to_record()
        self.assertEqual(record['kind'], 'cycles')
        self.assertEqual(record['counts'], {'1+2|3': 4})
        self.assertEqual(record['reference']['1+1+1'], '1/6')

    def test_merge(self):
        a = simulate_product_model(3, 2, 300, 1)
        b = simulate_product_model(3, 2, 200, 2)
        merged = merge_stats(a, b)
        self.assertEqual(merged.total, 500)
        self.assertEqual(merged.counts, a.counts + b.counts)
        with self.assertRaises(CycleTypeError):
            merge_stats(a, JointCycleStats(n=4, r=2))


class IndependenceTests(SimpleTestCase):
    def test_pooling(self):
        obs, exp, pooled = pool_small_cells({'a': 1, 'b': 0, 'c': 4, 'd': 95},
                                            {'a': 1.0, 'b': 2.0, 'c': 3.0, 'd': 100.0})
        self.assertEqual(pooled, ['a', 'b', 'c'])
        self.assertEqual(obs, [95, 5])
        self.assertEqual(exp, [100.0, 6.0])

    def test_minimum_samples(self):
        self.assertEqual(minimum_samples(3, 2), 450)
        with self.assertRaises(SampleSizeError):
            independence_test(simulate_product_model(3, 2, 400, 1))

    def test_product_model_is_accepted(self):
        report = independence_test(simulate_product_model(3, 2, 2000, 17))
        self.assertFalse(report.rejects(0.001))
        self.assertEqual(report.joint.dof, 8)
        self.assertEqual(len(report.marginals), 2)
        self.assertEqual(report.to_record()['reference'], 'S_n')

    def test_copied_coordinate_is_rejected(self):
        single = simulate_product_model(3, 1, 10**4, 5)
        stats = JointCycleStats(n=3, r=2)
        for (lam,), c in single.counts.items():
            stats.add((lam, lam), c)
        report = independence_test(stats)
        self.assertLess(report.joint.p_value, 1e-6)
        self.assertTrue(all(m.p_value > 1e-6 for m in report.marginals))

    @tag('slow')
    def test_null_calibration(self):
        rejections = sum(
            independence_test(simulate_product_model(3, 2, 1000, seed)).rejects(0.01)
            for seed in range(500)
        )
        self.assertGreaterEqual(rejections, 2)
        self.assertLessEqual(rejections, 15)

    @tag('slow')
    def test_marginals_at_101(self):
        samples = 10**5
        stats = joint_cycle_sample(build_tuple_spec('101', 3, '0,1'), samples, 20120101)
        report = independence_test(stats, finite_q=101)
        self.assertTrue(all(m.p_value > 0.001 for m in report.marginals))
        sigma = math.sqrt((1 / 9) * (8 / 9) / stats.total)
        self.assertLessEqual(abs(stats.frequency(((3,), (3,))) - 1 / 9), 3 * sigma)

    @tag('slow')
    def test_joint_independence_at_1009(self):
        stats = joint_cycle_sample(build_tuple_spec('1009', 3, '0,1'), 10**5, 20120101)
        report = independence_test(stats, finite_q=1009)
        self.assertFalse(report.rejects(0.01))
        self.assertEqual(report.reference, 'F_1009')


class SquareClassTests(SimpleTestCase):
    F5 = field_make(5)

    def U(self, text):
        return poly_parse(text, self.F5)

    def test_independent_linear_forms(self):
        self.assertTrue(square_class_independence([self.U('U'), self.U('U+1'), self.U('U+2')]))

    def test_square_multiple_is_dependent(self):
        d = self.U('U')
        self.assertFalse(square_class_independence([d, d * self.U('U+1') * self.U('U+1') * 3]))

    def test_product_is_dependent(self):
        discs = [self.U('U'), self.U('U+1'), self.U('U^2+U')]
        self.assertFalse(square_class_independence(discs))
        self.assertTrue(square_class_independence(discs[:2]))

    def test_constant_is_dependent(self):
        self.assertFalse(square_class_independence([self.U('3')]))
        with self.assertRaises(ParityError):
            square_class_independence([Poly(self.F5)])

    def test_shared_factor_is_not_dependence(self):
        discs = [self.U('U') * self.U('U+1'), self.U('U') * self.U('U+2')]
        self.assertTrue(square_class_independence(discs))

    def test_count_over_specialisations(self):
        report = square_class_count(build_tuple_spec('5', 2, '0,1'))
        self.assertEqual((report.independent, report.dependent, report.degenerate), (5, 0, 0))
        # u = 2 makes both discriminants 4 - 4U
        report = square_class_count(build_tuple_spec('5', 2, '0,t'))
        self.assertEqual((report.independent, report.dependent), (4, 1))
        self.assertEqual(report.to_record()['space'], 5)
        with self.assertRaises(BudgetExceededError):
            square_class_count(build_tuple_spec('5', 3, '0,1'), budget=10)


class SignPatternTests(SimpleTestCase):
    def test_single_linear_discriminant_is_balanced(self):
        for q in (5, 7, 11, 13):
            F = field_make(q)
            report = sign_pattern_stats(build_tuple_spec(str(q), 2, '0'), [F.one])
            self.assertEqual(report.skipped, 1)
            self.assertEqual(report.counts[(1,)], (q - 1) // 2)
            self.assertEqual(report.counts[(-1,)], (q - 1) // 2)

    def test_pairs_are_near_uniform(self):
        F = field_make(101)
        report = sign_pattern_stats(build_tuple_spec('101', 2, '0,1'), [F.element(3)])
        self.assertEqual(report.total + report.skipped, 101)
        self.assertEqual(set(report.counts), set(itertools.product((1, -1), repeat=2)))
        self.assertGreater(report.p_value, 0.01)
        self.assertEqual(set(report.to_record()['counts']), {'++', '+-', '-+', '--'})

    def test_even_q_is_rejected(self):
        spec = build_tuple_spec('2^2', 2, '0,1', allow_even_q=True)
        with self.assertRaises(ParityError):
            sign_pattern_stats(spec, [spec.field.one])
