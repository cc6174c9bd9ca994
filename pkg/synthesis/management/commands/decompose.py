from ... import f2core
from ...circuit import EmitFormat, emit
from ...clifford import decompose, lower_to_gates
from ...serializers import CircuitSerializer, DecompositionSerializer
from ..base import LcsCommand, read_input


class Command(LcsCommand):
    help = 'Factor a 2m x 2m symplectic matrix and lower it to gates'
    subcommand = 'decompose'

    def add_arguments(self, parser):
        parser.add_argument('matrix', help='File with one row of 0/1 characters per line')
        self.add_output_arguments(parser)

    def run(self, config, options):
        matrix = f2core.parse_matrix(read_input(options['matrix']))
        decomposition = decompose(matrix)
        lowered = lower_to_gates(decomposition)

        if config['format'] == 'json':
            payload = dict(DecompositionSerializer(decomposition).data)
            payload['circuit'] = CircuitSerializer(lowered).data
            self.emit_json(payload, config)
            return
        if config['format'] == 'qasm':
            self.emit(emit(lowered, EmitFormat.QASM), config)
            return

        parts = [f'k = {decomposition.k}']
        for name in ('q1', 'r1', 'r2', 'q2'):
            parts.append(f'{name.upper()}:\n' + f2core.format_matrix(getattr(decomposition, name)).rstrip('\n'))
        parts.append('circuit:\n' + emit(lowered).rstrip('\n'))
        self.emit('\n'.join(parts) + '\n', config)
