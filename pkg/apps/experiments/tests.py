import io
import json
import math
import tempfile
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings, tag

from .config import ConfigError, build_sweep_config
from .grid import FitError, fit_error_exponent, grid_policy
from .models import ShardCheckpoint, SweepRun
from .output import ResultWriter, format_records, read_records
from .runner import CheckpointMismatchError, run_sweep


def fit_rows(qs, exponent=1.5, n=2, offsets='0,1'):
    return [{'kind': 'count', 'field': str(q), 'n': n, 'offsets': offsets,
             'abs_error': 0.3 * q**exponent} for q in qs]


class GridTests(SimpleTestCase):
    def test_grid_policy(self):
        self.assertEqual(grid_policy(27),
                         ['3', '5', '7', '3^2', '11', '13', '17', '19', '23', '5^2', '3^3'])
        self.assertEqual(grid_policy(8, odd_only=False), ['2', '3', '2^2', '5', '7', '2^3'])
        self.assertEqual(grid_policy(2), [])

    def test_fit_recovers_exponent(self):
        fit = fit_error_exponent(fit_rows([5, 7, 11, 13, 17, 19]))
        self.assertAlmostEqual(fit.slope, 1.5, places=9)
        self.assertAlmostEqual(fit.intercept, math.log(0.3), places=9)
        self.assertEqual((fit.points, fit.excluded), (6, 0))

    def test_fit_is_order_invariant(self):
        rows = fit_rows([5, 7, 11, 13, 17])
        self.assertEqual(fit_error_exponent(rows), fit_error_exponent(reversed(rows)))

    def test_zero_errors_are_excluded(self):
        rows = fit_rows([5, 7, 11, 13]) + [dict(fit_rows([3])[0], abs_error=0.0)]
        self.assertEqual(fit_error_exponent(rows).excluded, 1)
        with self.assertRaises(FitError):
            fit_error_exponent([dict(r, abs_error=0.0) for r in rows])

    def test_mixed_tuples_are_refused(self):
        with self.assertRaises(FitError):
            fit_error_exponent(fit_rows([5, 7, 11]) + fit_rows([13], offsets='0,2'))
        with self.assertRaises(FitError):
            fit_error_exponent([])


class OutputTests(SimpleTestCase):
    def test_json_lines_are_canonical(self):
        text = format_records([{'b': 1, 'a': [1, 2]}])
        self.assertEqual(text, '{"a":[1,2],"b":1}\n')

    def test_csv_uses_record_keys(self):
        text = format_records([{'kind': 'count', 'pi': 5, 'seed': None}], 'csv')
        self.assertEqual(text.splitlines(), ['kind,pi,seed', 'count,5,'])

    def test_writer_header_and_rows(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'sub' / 'out.jsonl'
            writer = ResultWriter(path, 'abc', {'n': 2})
            writer.write({'kind': 'count', 'pi': 5})
            lines = path.read_text().splitlines()
            self.assertEqual(json.loads(lines[0])['kind'], 'meta')
            self.assertIn('created_at', json.loads(lines[0]))
            self.assertEqual(read_records(path), [{'kind': 'count', 'pi': 5}])

    def test_write_failure_is_recorded(self):
        with tempfile.TemporaryDirectory() as tmp:
            blocker = Path(tmp) / 'file'
            blocker.write_text('')
            with self.assertLogs('apps.experiments.output', 'ERROR'):
                writer = ResultWriter(blocker / 'out.jsonl', 'abc', {})
            self.assertFalse(writer.ok)
            writer.write({'kind': 'count'})
            self.assertEqual(len(writer.errors), 1)


class TempOutputMixin:
    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)
        self._override = override_settings(HLLAB_OUTPUT_DIR=self.tmp)
        self._override.enable()

    def tearDown(self):
        self._override.disable()
        self._tmp.cleanup()
        super().tearDown()


class SweepConfigTests(TempOutputMixin, SimpleTestCase):
    def test_defaults(self):
        config = build_sweep_config({'field': '3,5', 'n': 2, 'offsets': '0,1'})
        self.assertEqual(config.grid, ('3', '5'))
        self.assertEqual(config.mode, 'exact')
        self.assertEqual(config.shards, 1)
        self.assertEqual(config.output_path.parent, self.tmp)

    def test_grid_max_extends_the_grid(self):
        config = build_sweep_config({'field': '3', 'grid_max': 9, 'n': 2, 'offsets': '0,1'})
        self.assertEqual(config.grid, ('3', '5', '7', '3^2'))

    def test_even_q_aborts_with_every_error(self):
        with self.assertRaises(ConfigError) as ctx:
            build_sweep_config({'field': '2^2,5', 'n': 2, 'offsets': '0,0'})
        messages = ' '.join(ctx.exception.errors)
        self.assertIn('2^2', messages)
        self.assertIn('duplicated', messages)
        self.assertEqual(len(ctx.exception.errors), 3)

    def test_sample_mode_needs_samples(self):
        with self.assertRaises(ConfigError):
            build_sweep_config({'field': '5', 'n': 2, 'offsets': '0,1', 'mode': 'sample'})

    def test_digest_ignores_output_location(self):
        a = build_sweep_config({'field': '5', 'n': 2, 'offsets': '0,1', 'out': 'a.jsonl'})
        b = build_sweep_config({'field': '5', 'n': 2, 'offsets': '0,1', 'format': 'csv'})
        self.assertEqual(a.digest(), b.digest())
        c = build_sweep_config({'field': '5', 'n': 2, 'offsets': '0,1', 'shards': 2})
        self.assertNotEqual(a.digest(), c.digest())

    def test_config_file_and_overrides(self):
        path = self.tmp / 'sweep.env'
        path.write_text('FIELD=3,5\nN=2\nOFFSETS=0,1\nMODE=sample\nSAMPLES=100\n')
        config = build_sweep_config({'n': None, 'samples': 200}, path)
        self.assertEqual(config.grid, ('3', '5'))
        self.assertEqual(config.samples, 200)
        self.assertEqual(config.mode, 'sample')

    def test_unknown_config_key(self):
        path = self.tmp / 'bad.env'
        path.write_text('FIELDS=3\n')
        with self.assertRaises(ConfigError):
            build_sweep_config({}, path)


class SweepRunnerTests(TempOutputMixin, TestCase):
    def config(self, **extra):
        options = {'field': '3,5,7,3^2,11', 'n': 2, 'offsets': '0,1'}
        options.update(extra)
        return build_sweep_config(options)

    def body(self, path):
        return Path(path).read_text().splitlines()[1:]

    def test_exact_sweep(self):
        config = self.config()
        result = run_sweep(config)
        self.assertTrue(result.complete)
        self.assertEqual([row['pi'] for row in result.rows[:2]], [0, 5])
        self.assertEqual(len(result.rows), 5)
        self.assertEqual(read_records(config.output_path), result.rows)
        self.assertTrue(config.csv_path.exists())
        self.assertEqual(SweepRun.objects.get().status, 'completed')

    def test_empty_grid(self):
        result = run_sweep(build_sweep_config({'n': 2, 'offsets': '0,1'}))
        self.assertTrue(result.complete)
        self.assertEqual(result.rows, [])

    def test_rows_do_not_depend_on_shards(self):
        rows = [run_sweep(self.config(shards=s)).rows for s in (1, 2, 8)]
        self.assertEqual(rows[0], rows[1])
        self.assertEqual(rows[0], rows[2])

    def test_sample_and_cycle_rows_do_not_depend_on_shards(self):
        for mode in ('sample', 'cycles'):
            one = run_sweep(self.config(field='13', n=3, mode=mode, samples=5000)).rows
            three = run_sweep(self.config(field='13', n=3, mode=mode, samples=5000, shards=3)).rows
            self.assertEqual(one, three)

    def test_interrupted_sweep_resumes_to_same_output(self):
        reference = run_sweep(self.config(shards=2, out=str(self.tmp / 'ref.jsonl')))
        config = self.config(shards=2, out=str(self.tmp / 'run.jsonl'))
        first = run_sweep(config, max_tasks=3)
        self.assertFalse(first.complete)
        self.assertEqual(SweepRun.objects.get(output=str(config.output_path)).status, 'interrupted')
        self.assertEqual(len(first.rows), 1)
        second = run_sweep(config, resume=True)
        self.assertTrue(second.complete)
        self.assertEqual(second.rows, reference.rows)
        self.assertEqual(self.body(config.output_path), self.body(self.tmp / 'ref.jsonl'))

    def test_resume_of_completed_run_is_a_no_op(self):
        config = self.config()
        run_sweep(config)
        before = config.output_path.read_text()
        again = run_sweep(config, resume=True)
        self.assertTrue(again.complete)
        self.assertEqual(config.output_path.read_text(), before)
        self.assertEqual(len(again.rows), 5)

    def test_resume_with_other_offsets_is_refused(self):
        out = str(self.tmp / 'run.jsonl')
        run_sweep(self.config(out=out), max_tasks=1)
        with self.assertRaises(CheckpointMismatchError):
            run_sweep(self.config(out=out, offsets='0,2'), resume=True)

    def test_fresh_run_discards_checkpoints(self):
        config = self.config()
        run_sweep(config, max_tasks=1)
        run_sweep(config)
        self.assertEqual(SweepRun.objects.count(), 1)
        self.assertEqual(ShardCheckpoint.objects.filter(completed=False).count(), 0)

    def test_over_budget_points_are_refused(self):
        result = run_sweep(self.config(budget=30))
        self.assertEqual([row['field'] for row in result.rows], ['3', '5'])
        self.assertEqual(len(result.refused), 3)

    def test_cr_sweep(self):
        result = run_sweep(self.config(field='5', offsets='0,t', mode='cr'))
        self.assertEqual(result.rows[0]['N'], 4)

    @tag('slow')
    def test_quadratic_pair_error_exponent(self):
        result = run_sweep(self.config(field='', grid_max=499))
        self.assertEqual(result.rows[3]['field'], '3^2')
        self.assertTrue(all(row['normalized_error'] <= 1.0 for row in result.rows))
        self.assertLessEqual(fit_error_exponent(result.rows).slope, 1.6)


class CommandTests(TempOutputMixin, TestCase):
    def call(self, name, *args, **options):
        out, err = io.StringIO(), io.StringIO()
        call_command(name, *args, stdout=out, stderr=err, **options)
        return [json.loads(line) for line in out.getvalue().splitlines()]

    def assertExitCode(self, code, name, *args, **options):
        with self.assertRaises(CommandError) as ctx:
            self.call(name, *args, **options)
        self.assertEqual(ctx.exception.returncode, code)

    def test_count(self):
        [record] = self.call('count', field='5', n=2, offsets='0,1')
        self.assertEqual(record['pi'], 5)
        [brute] = self.call('count', field='5', n=2, offsets='0,1', brute=True)
        self.assertEqual(brute['pi'], 5)
        parts = [self.call('count', field='7', n=2, offsets='0,1', shards=3, shard=i)[0]['pi']
                 for i in range(3)]
        [whole] = self.call('count', field='7', n=2, offsets='0,1')
        self.assertEqual(sum(parts), whole['pi'])

    def test_count_validation_and_budget(self):
        self.assertExitCode(2, 'count', field='4', n=2, offsets='0,1')
        self.assertExitCode(2, 'count', field='2^2', n=2, offsets='0,1')
        self.assertExitCode(2, 'count', field='5', n=2, offsets='0,t^2')
        self.assertExitCode(2, 'count', field='5', n=2)
        self.assertExitCode(3, 'count', field='5', n=3, offsets='0,1', budget=10)
        self.assertExitCode(3, 'count', field='5', n=3, offsets='0,1', budget=10, shards=16)

    def test_even_q_override(self):
        [record] = self.call('count', field='2^2', n=2, offsets='0,1', allow_even_q=True)
        self.assertTrue(record['outside_hypotheses'])

    def test_estimate_calibration(self):
        [record] = self.call('estimate', field='7', n=3, offsets='0,1', enumerate_all=True)
        [exact] = self.call('count', field='7', n=3, offsets='0,1')
        self.assertEqual(record['pi'], exact['pi'])
        self.assertEqual(record['mode'], 'sampled')

    def test_estimate_is_seeded(self):
        a = self.call('estimate', field='31', n=3, offsets='0,1', samples=500, seed=4)
        b = self.call('estimate', field='31', n=3, offsets='0,1', samples=500, seed=4)
        self.assertEqual(a, b)
        self.assertEqual(a[0]['seed'], 4)

    def test_cr_density(self):
        [record] = self.call('cr_density', field='5', n=2, offsets='0,t')
        self.assertEqual((record['N'], record['space']), (4, 5))

    def test_cr_density_square_classes(self):
        density, classes = self.call('cr_density', field='5', n=2, offsets='0,t', square_classes=True)
        self.assertEqual(density['kind'], 'cr')
        self.assertEqual(classes['kind'], 'square_classes')
        self.assertEqual((classes['independent'], classes['dependent']), (4, 1))

    def test_cycle_stats_signs(self):
        records = self.call('cycle_stats', field='7', n=3, offsets='0,1', samples=100, signs='1,2')
        self.assertEqual([r['kind'] for r in records], ['cycles', 'signs'])
        self.assertEqual(records[1]['total'] + records[1]['skipped'], 7)
        self.assertExitCode(2, 'cycle_stats', field='7', n=3, offsets='0,1', samples=100, signs='1')
        self.assertExitCode(2, 'cycle_stats', field='7', n=3, offsets='0,1', samples=100, signs='t,1')

    def test_cycle_stats(self):
        records = self.call('cycle_stats', field='7', n=3, offsets='0,1', samples=1000, seed=1)
        self.assertEqual([r['kind'] for r in records], ['cycles', 'independence'])
        self.assertEqual(records[1]['reference'], 'S_n')
        records = self.call('cycle_stats', field='7', n=3, offsets='0,1', samples=1000,
                            finite_reference=True)
        self.assertEqual(records[1]['reference'], 'F_7')

    def test_cycle_stats_too_few_samples(self):
        records = self.call('cycle_stats', field='7', n=3, offsets='0,1', samples=100)
        self.assertEqual([r['kind'] for r in records], ['cycles'])

    def test_csv_output_file(self):
        out = self.tmp / 'count.csv'
        self.call('count', field='5', n=2, offsets='0,1', format='csv', out=str(out))
        header, row = out.read_text().splitlines()
        self.assertIn('normalized_error', header.split(','))
        self.assertTrue(row.startswith('5,2,'))

    def test_fit(self):
        path = self.tmp / 'rows.jsonl'
        path.write_text(format_records([{'kind': 'meta'}] + fit_rows([5, 7, 11, 13, 17])))
        [record] = self.call('fit', str(path))
        self.assertEqual(record['kind'], 'fit')
        self.assertAlmostEqual(record['slope'], 1.5)
        self.assertEqual(record['bound'], 1.5)
        empty = self.tmp / 'empty.jsonl'
        empty.write_text(format_records([{'kind': 'meta'}]))
        self.assertExitCode(2, 'fit', str(empty))

    def test_sweep(self):
        out = self.tmp / 'sweep.jsonl'
        self.call('sweep', field='3,5', n=2, offsets='0,1', out=str(out), no_progress=True)
        self.assertEqual([r['pi'] for r in read_records(out)], [0, 5])
        self.assertTrue(out.with_suffix('.csv').exists())

    def test_sweep_echo_follows_format(self):
        out = self.tmp / 'sweep.jsonl'
        rows = self.call('sweep', field='3,5', n=2, offsets='0,1', out=str(out), no_progress=True)
        self.assertEqual([r['pi'] for r in rows], [0, 5])
        buf = io.StringIO()
        call_command('sweep', field='3,5', n=2, offsets='0,1', out=str(out), format='csv',
                     no_progress=True, stdout=buf, stderr=io.StringIO())
        header, *lines = buf.getvalue().splitlines()
        self.assertIn('pi', header.split(','))
        self.assertEqual(len(lines), 2)
        self.assertEqual(len(read_records(out)), 2)

    def test_sweep_refusal_and_validation(self):
        out = self.tmp / 'sweep.jsonl'
        self.assertExitCode(3, 'sweep', field='3,5', n=2, offsets='0,1', budget=10,
                            out=str(out), no_progress=True)
        self.assertEqual(len(read_records(out)), 1)
        self.assertExitCode(2, 'sweep', field='4', n=2, offsets='0,1', no_progress=True)
