from apps.hlcount.counting import pi_sample

from ._base import LabCommand


class Command(LabCommand):
    help = 'Sampled estimate of pi(q, n; a) with a 95% confidence half-width'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--enumerate-all', action='store_true',
                            help='Calibration: enumerate instead of sampling (needs --samples = q^n)')

    def run(self, **options):
        spec = self.get_spec(options)
        samples = options.get('samples')
        if samples is None:
            samples = spec.q**spec.n if options['enumerate_all'] else 10**4
        result = pi_sample(spec, samples, self.get_seed(options),
                           enumerate_all=options['enumerate_all'], budget=options.get('budget'))
        self.emit([result.to_record()], options)
