from apps.hlcount.counting import pi_brute, pi_exact, pi_exact_sharded

from ._base import LabCommand


class Command(LabCommand):
    help = 'Exact pi(q, n; a) by enumeration of all monic f of degree n'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--shard', type=int,
                            help='Only this shard index (of --shards); prints the partial count')
        parser.add_argument('--brute', action='store_true',
                            help='Count by distinct-degree factorisation instead of Rabin')

    def run(self, **options):
        spec = self.get_spec(options)
        budget = options.get('budget')
        total = options.get('shards') or 1
        if options['brute']:
            result = pi_brute(spec, budget)
        elif options.get('shard') is not None:
            result = pi_exact(spec, (options['shard'], total), budget)
        else:
            result = pi_exact_sharded(spec, total, budget)
        self.emit([result.to_record()], options)
