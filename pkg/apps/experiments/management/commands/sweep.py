from django.core.management.base import CommandError

from apps.experiments.config import build_sweep_config
from apps.experiments.output import format_records
from apps.experiments.runner import run_sweep

from ._base import EXIT_BUDGET, EXIT_IO, LabCommand


class Command(LabCommand):
    help = 'Run a grid of tuple counts, estimates or statistics with checkpoints'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--config', help='Flat KEY=value config file; flags override it')
        parser.add_argument('--grid-max', type=int, help='Add every odd prime power up to this q')
        parser.add_argument('--mode', choices=['exact', 'sample', 'cr', 'cycles'])
        parser.add_argument('--resume', action='store_true')
        parser.add_argument('--workers', type=int)
        parser.add_argument('--no-progress', action='store_true')

    def run(self, **options):
        config = build_sweep_config(options, options.get('config'))
        result = run_sweep(config, resume=options['resume'], workers=options.get('workers'),
                           progress=not options['no_progress'] and self.stdout.isatty())
        self.stderr.write(f"{len(result.rows)} row(s) in {config.output_path}")
        # the result file is always JSON lines plus its CSV render; --format picks the echo
        self.stdout.write(format_records(result.rows, config.format), ending='')
        if result.io_errors:
            raise CommandError('; '.join(result.io_errors), returncode=EXIT_IO)
        if result.refused:
            raise CommandError('refused: ' + '; '.join(result.refused), returncode=EXIT_BUDGET)
