import logging

from apps.experiments.config import ConfigError
from apps.fqpoly.parsing import poly_parse
from apps.galois_stats.cycles import joint_cycle_sample, simulate_product_model
from apps.galois_stats.independence import SampleSizeError, independence_test, minimum_samples
from apps.galois_stats.parity import sign_pattern_stats
from apps.hlcount.counting import check_budget
from apps.hlcount.tuples import split_offsets

from ._base import LabCommand

logger = logging.getLogger(__name__)


class Command(LabCommand):
    help = 'Joint cycle types of f + a_i over random f, with chi-square independence tests'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--finite-reference', action='store_true',
                            help='Test against the exact F_q factorisation-type distribution instead of S_n')
        parser.add_argument('--simulate', action='store_true',
                            help='Draw from independent uniform permutations instead of polynomials')
        parser.add_argument('--signs', metavar='U1,...',
                            help='Also tally quadratic-character patterns of the family '
                                 'discriminants specialised at u = (u_1, ..., u_{n-1})')

    def run(self, **options):
        spec = self.get_spec(options)
        samples = options.get('samples') or 10**4
        check_budget(samples, options.get('budget'))
        seed = self.get_seed(options)
        if options['simulate']:
            stats = simulate_product_model(spec.n, spec.r, samples, seed)
        else:
            stats = joint_cycle_sample(spec, samples, seed)
        records = [stats.to_record()]
        if stats.total >= minimum_samples(stats.n, stats.r):
            q = spec.q if options['finite_reference'] and not options['simulate'] else None
            records.append(independence_test(stats, finite_q=q).to_record())
        else:
            self.stderr.write(str(SampleSizeError(
                f"{stats.total} kept samples, independence test needs "
                f"{minimum_samples(stats.n, stats.r)}")))
        if options.get('signs'):
            u = self.get_specialisation(spec, options['signs'])
            records.append(sign_pattern_stats(spec, u).to_record())
        self.emit(records, options)

    def get_specialisation(self, spec, text):
        values = [poly_parse(part, spec.field) for part in split_offsets(text)]
        if len(values) != spec.n - 1 or any(v.degree > 0 for v in values):
            raise ConfigError([f"--signs needs {spec.n - 1} field constants, got {text!r}"])
        return [v.coeff(0) for v in values]
