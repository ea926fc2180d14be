from django.core.management.base import CommandError

from apps.experiments.grid import fit_error_exponent
from apps.experiments.output import read_records

from ._base import EXIT_VALIDATION, LabCommand


class Command(LabCommand):
    help = 'Fit log(abs_error) against log(q) over the count rows of sweep outputs'

    def add_arguments(self, parser):
        parser.add_argument('inputs', nargs='+', help='JSON-lines result files')
        parser.add_argument('--out')
        parser.add_argument('--format', choices=['json', 'csv'])

    def run(self, **options):
        rows = []
        for path in options['inputs']:
            rows.extend(r for r in read_records(path) if r.get('kind') == 'count')
        if not rows:
            raise CommandError("no count rows in the inputs", returncode=EXIT_VALIDATION)
        fit = fit_error_exponent(rows)
        n = rows[0]['n']
        record = {
            'kind': 'fit',
            'n': n,
            'offsets': rows[0]['offsets'],
            'slope': fit.slope,
            'intercept': fit.intercept,
            'points': fit.points,
            'excluded': fit.excluded,
            'bound': n - 0.5,
        }
        self.emit([record], options)
