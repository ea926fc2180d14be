import math
import random
import time

from django.test import SimpleTestCase, override_settings, tag

from apps.fqpoly.enumeration import irreducible_count
from apps.fqpoly.parsing import poly_format, poly_parse
from apps.fqpoly.poly import Poly

from .counting import (
    BudgetExceededError,
    MODE_EXACT,
    MODE_SAMPLED,
    count_range,
    merge_counts,
    pi_brute,
    pi_exact,
    pi_exact_sharded,
    pi_sample,
    sample_hits,
)
from .crlab import cr_count_exact
from .sampling import SAMPLE_BLOCK, iter_draws
from .tuples import TupleSpecError, build_tuple_spec, split_offsets, validate_tuple

ODD_GRID = [3, 5, 7, 9, 11, 13, 25, 27]


def label(q):
    return {9: '3^2', 25: '5^2', 27: '3^3'}.get(q, str(q))


def spec(q, n, offsets, **kwargs):
    return build_tuple_spec(label(q), n, offsets, **kwargs)


def random_offset(field, n, rng):
    return poly_format(Poly(field, [rng.randrange(field.q) for _ in range(n)]))


class TupleSpecTests(SimpleTestCase):
    def test_valid(self):
        self.assertEqual(validate_tuple(spec(5, 2, '0,1')), [])

    def test_duplicates(self):
        violations = validate_tuple(spec(5, 2, '0,0'))
        self.assertEqual(len(violations), 1)
        self.assertIn('duplicated', violations[0])

    def test_even_q(self):
        violations = validate_tuple(build_tuple_spec('2^2', 3, '0,1'))
        self.assertEqual(len(violations), 1)
        self.assertIn('even', violations[0])
        self.assertEqual(validate_tuple(build_tuple_spec('2^2', 3, '0,1', allow_even_q=True)), [])

    def test_every_violation_is_listed(self):
        violations = validate_tuple(build_tuple_spec('2^2', 2, '1,1,t^2'))
        self.assertEqual(len(violations), 3)

    def test_split_offsets_keeps_tuples(self):
        self.assertEqual(split_offsets('0, (1,2)*t+1 ,t'), ['0', '(1,2)*t+1', 't'])

    def test_digest_is_stable(self):
        a = spec(5, 2, '0,1')
        b = spec(5, 2, ['0', '6'])
        self.assertEqual(a.digest(), b.digest())
        self.assertNotEqual(a.digest(), spec(5, 2, '0,2').digest())

    def test_short_circuit_order(self):
        s = spec(7, 3, 't^2,3,t+1,1')
        self.assertEqual([poly_format(a) for a in s.short_circuit_order()], ['1', '3', 't+1', 't^2'])


class ExactCountTests(SimpleTestCase):
    def test_f3_pair_has_no_hits(self):
        result = pi_exact(spec(3, 2, '0,1'))
        self.assertEqual(result.pi, 0)
        self.assertEqual(result.prediction.numerator, 9)
        self.assertEqual(result.prediction.denominator, 4)
        self.assertAlmostEqual(result.normalized_error, 0.433, places=3)
        self.assertEqual(pi_brute(spec(3, 2, '0,1')).pi, 0)

    def test_f5_pair(self):
        result = pi_exact(spec(5, 2, '0,1'))
        self.assertEqual(result.pi, 5)
        self.assertAlmostEqual(result.normalized_error, 0.112, places=3)
        self.assertEqual(pi_brute(spec(5, 2, '0,1')).pi, 5)

    def test_single_offset_is_necklace_count(self):
        self.assertEqual(pi_exact(spec(3, 2, '0')).pi, 3)
        rng = random.Random(2)
        for q in ODD_GRID:
            for n in (2, 3, 4):
                if q**n > 10**4:
                    continue
                s0 = spec(q, n, '0')
                for _ in range(3):
                    s = spec(q, n, [random_offset(s0.field, n, rng)])
                    self.assertEqual(pi_exact(s).pi, irreducible_count(q, n), msg=str(s))

    @tag('slow')
    def test_single_offset_is_necklace_count_full_grid(self):
        rng = random.Random(3)
        for q in ODD_GRID:
            for n in (2, 3, 4):
                if q**n > 10**6:
                    continue
                s0 = spec(q, n, '0')
                for _ in range(3):
                    s = spec(q, n, [random_offset(s0.field, n, rng)])
                    self.assertEqual(pi_exact(s).pi, irreducible_count(q, n), msg=str(s))

    def test_quadratic_fast_path_matches_rabin(self):
        for q in (3, 7, 9, 13, 25):
            s = spec(q, 2, '0,1,t+2')
            fast = pi_exact(s).pi
            with override_settings(HLLAB_TABLE_LIMIT=1):
                slow = pi_exact(s).pi
            self.assertEqual(fast, slow, msg=str(s))
            self.assertEqual(pi_brute(s).pi, fast)

    def test_cubic_fast_path_matches_rabin(self):
        for q, offsets in [(5, '0,1'), (7, '0,t,t^2+3'), (11, '0,1,2'), (13, 't^2,2*t+1')]:
            s = spec(q, 3, offsets)
            for shard in [(0, 1), (1, 3)]:
                fast = pi_exact(s, shard).pi
                with override_settings(HLLAB_TABLE_LIMIT=1):
                    slow = pi_exact(s, shard).pi
                self.assertEqual(fast, slow, msg=f"{s} {shard}")
            fast = count_range(s, (1, 2), lo=100, hi=900)
            with override_settings(HLLAB_TABLE_LIMIT=1):
                self.assertEqual(count_range(s, (1, 2), lo=100, hi=900), fast)

    def test_brute_force_agrees_for_cubics(self):
        for q in (3, 5, 7, 9):
            s = spec(q, 3, '0,1')
            self.assertEqual(pi_exact(s).pi, pi_brute(s).pi)

    def test_shards_sum_to_total(self):
        s = spec(7, 3, '0,t,2')
        total = pi_exact(s).pi
        for shards in (2, 3, 8):
            parts = [pi_exact(s, (i, shards)) for i in range(shards)]
            self.assertEqual(sum(p.pi for p in parts), total)
            merged = merge_counts(parts)
            self.assertEqual(merged.pi, total)
            self.assertEqual(merged.to_record(), pi_exact(s).to_record())

    def test_common_shift_invariance(self):
        rng = random.Random(5)
        for q, n in [(5, 3), (7, 2), (9, 2), (3, 4)]:
            field = spec(q, n, '0').field
            base = [random_offset(field, n, rng) for _ in range(2)]
            if base[0] == base[1]:
                continue
            b = random_offset(field, n, rng)
            shifted = [poly_format(a + poly_parse(b, field)) for a in spec(q, n, base).offsets]
            self.assertEqual(pi_exact(spec(q, n, base)).pi, pi_exact(spec(q, n, shifted)).pi)

    def test_substitution_invariance(self):
        for q, n, c in [(5, 3, 2), (7, 2, 3), (9, 2, 4), (3, 4, 1)]:
            s = spec(q, n, '0,t,t+1')
            moved = [poly_format(a.shift(s.field.from_code(c))) for a in s.offsets]
            self.assertEqual(pi_exact(s).pi, pi_exact(spec(q, n, moved)).pi)

    def test_permutation_invariance(self):
        self.assertEqual(pi_exact(spec(7, 3, '0,1,t')).pi, pi_exact(spec(7, 3, 't,0,1')).pi)

    @tag('slow')
    def test_throughput(self):
        for s, expected in [(spec(101, 3, '0,1'), 113322), (spec(1009, 2, '0,1'), None)]:
            started = time.perf_counter()
            result = pi_exact(s)
            elapsed = time.perf_counter() - started
            if expected is not None:
                self.assertEqual(result.pi, expected)
            self.assertGreaterEqual(s.q**s.n / elapsed, 10**5, msg=str(s))

    def test_budget_refusal(self):
        with self.assertRaises(BudgetExceededError):
            pi_exact(spec(5, 2, '0,1'), budget=10)

    def test_budget_covers_every_shard(self):
        s = spec(5, 3, '0,1')
        with self.assertRaises(BudgetExceededError):
            pi_exact_sharded(s, 16, budget=10)
        self.assertEqual(pi_exact_sharded(s, 16, budget=125).pi, pi_exact(s).pi)

    def test_invalid_spec_is_refused(self):
        with self.assertRaises(TupleSpecError):
            pi_exact(spec(5, 2, '0,0'))

    def test_record(self):
        record = pi_exact(spec(5, 2, '0,1')).to_record()
        self.assertEqual(record['kind'], 'count')
        self.assertEqual(record['field'], '5')
        self.assertEqual(record['offsets'], '0,1')
        self.assertEqual(record['mode'], MODE_EXACT)
        self.assertEqual(record['prediction'], '25/4')
        self.assertIsNone(record['ci_half_width'])
        self.assertFalse(record['outside_hypotheses'])

    def test_even_q_is_flagged(self):
        s = build_tuple_spec('2^2', 2, '0,1', allow_even_q=True)
        self.assertTrue(pi_exact(s).to_record()['outside_hypotheses'])

    def test_density_for_cubic_pairs(self):
        for q in (3, 5, 7, 9, 11, 13):
            pi = pi_exact(spec(q, 3, '0,1')).pi
            self.assertLessEqual(abs(pi / q**3 - 1 / 9), 2 / math.sqrt(q), msg=f"q={q}")

    @tag('slow')
    def test_density_for_cubic_pairs_to_31(self):
        for q in (17, 19, 23, 25, 27, 29, 31):
            pi = pi_exact(spec(q, 3, '0,1')).pi
            self.assertLessEqual(abs(pi / q**3 - 1 / 9), 2 / math.sqrt(q), msg=f"q={q}")


class SamplingTests(SimpleTestCase):
    def test_draws_are_reproducible_per_index(self):
        full = list(iter_draws(9, SAMPLE_BLOCK + 10, 7, 3))
        second = list(iter_draws(9, SAMPLE_BLOCK + 10, 7, 3, blocks=[1]))
        self.assertEqual(full[SAMPLE_BLOCK:], second)
        self.assertTrue(all(row[-1] == 1 and len(row) == 4 for row in full))

    def test_short_run_is_prefix_of_long_run(self):
        self.assertEqual(list(iter_draws(4, 100, 11, 2)), list(iter_draws(4, 1000, 11, 2))[:100])

    def test_same_seed_same_estimate(self):
        s = spec(31, 3, '0,1')
        self.assertEqual(pi_sample(s, 2000, 17).to_record(), pi_sample(s, 2000, 17).to_record())

    def test_block_split_matches_whole(self):
        s = spec(13, 3, '0,1')
        samples = 2 * SAMPLE_BLOCK + 5
        whole = sample_hits(s, samples, 8)
        parts = sum(sample_hits(s, samples, 8, blocks=[b]) for b in range(3))
        self.assertEqual(whole, parts)

    def test_calibration_mode_equals_exact(self):
        s = spec(7, 3, '0,1')
        result = pi_sample(s, 7**3, 1, enumerate_all=True)
        self.assertEqual(result.pi, pi_exact(s).pi)
        self.assertEqual(result.mode, MODE_SAMPLED)
        with self.assertRaises(ValueError):
            pi_sample(s, 100, 1, enumerate_all=True)

    def test_quadratic_sampling_matches_rabin(self):
        s = spec(31, 2, '0,1')
        fast = sample_hits(s, 3000, 21)
        with override_settings(HLLAB_TABLE_LIMIT=1):
            slow = sample_hits(s, 3000, 21)
        self.assertEqual(fast, slow)

    def test_cubic_sampling_matches_rabin(self):
        s = spec(31, 3, '0,1,t')
        samples = 2 * SAMPLE_BLOCK + 7
        fast = sample_hits(s, samples, 4)
        with override_settings(HLLAB_TABLE_LIMIT=1):
            slow = sample_hits(s, samples, 4)
            slow_tail = sample_hits(s, samples, 4, blocks=[2])
        self.assertEqual(fast, slow)
        self.assertEqual(sample_hits(s, samples, 4, blocks=[2]), slow_tail)

    @tag('slow')
    def test_confidence_interval_coverage(self):
        s = spec(31, 2, '0,1')
        exact = pi_exact(s).pi
        covered = 0
        for seed in range(200):
            r = pi_sample(s, 500, seed)
            covered += abs(r.pi - exact) <= r.ci_half_width
        self.assertGreaterEqual(covered, 180)
        self.assertLessEqual(covered, 198)

    @tag('slow')
    def test_cubic_pair_density_at_101(self):
        samples = 10**5
        r = pi_sample(spec(101, 3, '0,1'), samples, 20120101)
        frac = r.hits / samples
        sigma = math.sqrt((1 / 9) * (8 / 9) / samples)
        self.assertLessEqual(abs(frac - 1 / 9), 3 * sigma)


class DiscriminantDensityTests(SimpleTestCase):
    def test_examples(self):
        report = cr_count_exact(spec(5, 2, '0,1'))
        self.assertEqual((report.N, report.space), (5, 5))
        report = cr_count_exact(spec(5, 2, '0,t'))
        self.assertEqual(report.N, 4)
        self.assertEqual(report.not_coprime, 1)
        self.assertEqual(cr_count_exact(spec(3, 2, '0')).N, 3)

    def test_tallies_partition_the_complement(self):
        report = cr_count_exact(spec(7, 3, '0,1,t'))
        self.assertEqual(report.N + report.not_squarefree + report.not_coprime + report.constant,
                         report.space)

    def test_density_for_cubics(self):
        for q in (3, 5, 7, 9, 11):
            report = cr_count_exact(spec(q, 3, '0,1'))
            self.assertLessEqual(report.N, q**2)
            self.assertGreaterEqual(report.density, 1 - 3 / q, msg=f"q={q}")

    @tag('slow')
    def test_density_for_cubics_to_27(self):
        for q in (13, 17, 19, 23, 25, 27):
            self.assertGreaterEqual(cr_count_exact(spec(q, 3, '0,1')).density, 1 - 3 / q)

    def test_needs_degree_two(self):
        with self.assertRaises(ValueError):
            cr_count_exact(spec(5, 1, '0'))

    def test_budget(self):
        with self.assertRaises(BudgetExceededError):
            cr_count_exact(spec(5, 3, '0,1'), budget=10)

    def test_record(self):
        record = cr_count_exact(spec(5, 2, '0,t')).to_record()
        self.assertEqual(record['kind'], 'cr')
        self.assertEqual(record['offsets'], '0,t')
        self.assertEqual(record['density'], 0.8)
