from apps.galois_stats.parity import square_class_count
from apps.hlcount.crlab import cr_count_exact

from ._base import LabCommand


class Command(LabCommand):
    help = 'Count specialisations whose family discriminants are square-free, coprime and non-constant'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--square-classes', action='store_true',
                            help='Also count specialisations whose discriminants are independent '
                                 'modulo constants and squares')

    def run(self, **options):
        spec = self.get_spec(options)
        budget = options.get('budget')
        records = [cr_count_exact(spec, budget).to_record()]
        if options['square_classes']:
            records.append(square_class_count(spec, budget).to_record())
        self.emit(records, options)
