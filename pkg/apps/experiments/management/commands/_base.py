from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.experiments.config import ConfigError
from apps.experiments.grid import FitError
from apps.experiments.output import format_records
from apps.experiments.runner import CheckpointMismatchError
from apps.ffield.field import FieldError
from apps.fqpoly.dense import PolynomialError
from apps.galois_stats.cycles import CycleTypeError
from apps.galois_stats.independence import SampleSizeError
from apps.galois_stats.parity import ParityError
from apps.hlcount.counting import BudgetExceededError
from apps.hlcount.tuples import TupleSpecError, build_tuple_spec, ensure_valid

EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_IO = 4

VALIDATION_ERRORS = (
    ConfigError, TupleSpecError, FieldError, PolynomialError, CycleTypeError,
    SampleSizeError, ParityError, FitError, CheckpointMismatchError,
)


class LabCommand(BaseCommand):
    """Base for lab commands: shared flags and exit-code mapping."""

    def add_arguments(self, parser):
        parser.add_argument('--field', help='Field label "p" or "p^k"')
        parser.add_argument('--n', type=int, help='Degree of f')
        parser.add_argument('--offsets', help='Comma-separated offset polynomials')
        parser.add_argument('--samples', type=int)
        parser.add_argument('--seed', type=int)
        parser.add_argument('--shards', type=int)
        parser.add_argument('--budget', type=int)
        parser.add_argument('--out', help='Write results here instead of stdout')
        parser.add_argument('--format', choices=['json', 'csv'])
        parser.add_argument('--allow-even-q', action='store_true',
                            help='Permit even q; results are flagged outside the hypotheses')

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except VALIDATION_ERRORS as e:
            raise CommandError(str(e), returncode=EXIT_VALIDATION)
        except BudgetExceededError as e:
            raise CommandError(str(e), returncode=EXIT_BUDGET)
        except OSError as e:
            raise CommandError(f"I/O failure: {e}", returncode=EXIT_IO)

    def run(self, **options):
        raise NotImplementedError

    def get_spec(self, options):
        missing = [flag for flag in ('field', 'n', 'offsets') if options.get(flag) is None]
        if missing:
            raise ConfigError([f"--{flag} is required" for flag in missing])
        spec = build_tuple_spec(options['field'], options['n'], options['offsets'],
                                options.get('allow_even_q', False))
        return ensure_valid(spec)

    def get_seed(self, options):
        seed = options.get('seed')
        return settings.HLLAB_DEFAULT_SEED if seed is None else seed

    def emit(self, records, options):
        text = format_records(records, options.get('format') or 'json')
        out = options.get('out')
        if out:
            with open(out, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
            self.stderr.write(f"Wrote {len(records)} record(s) to {out}")
        else:
            self.stdout.write(text, ending='')
