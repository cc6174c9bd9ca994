from ... import codes, lcs
from ...circuit import EmitFormat, emit, parse_gates
from ...serializers import SolutionSerializer
from ...symplectic import SolveMode
from ..base import LcsCommand


def load_target(config, code):
    """Target and stabilizer images from --gates or --table."""
    if config.get('table'):
        return lcs.load_target_file(config['table'], code)
    return lcs.target_from_gates(code.k, parse_gates(config['gates'])), None


def describe(solution, position, total):
    metrics = solution.metrics
    touched = ','.join(str(q) for q in sorted(metrics.qubits_touched)) or '-'
    return (f'# solution {position} of {total} (index {solution.index}): depth={metrics.depth} '
            f'two_qubit_count={metrics.two_qubit_count} total_gates={metrics.total_gates} '
            f'qubits_touched={touched}')


class Command(LcsCommand):
    help = 'Synthesize every physical circuit for a logical Clifford on a stabilizer code'
    subcommand = 'synth'

    def add_arguments(self, parser):
        parser.add_argument('--code', help='builtin:<name> or a code definition file')
        parser.add_argument('--gates', help='Logical gate list, e.g. "H 1; CNOT 1 2"')
        parser.add_argument('--table', help='Conjugation-table target file')
        parser.add_argument('--mode', choices=['all', 'first', 'count'], default='all')
        parser.add_argument('--metric', default='depth',
                            help='depth, two-qubit, two-qubit-depth, avoid:<q,..> or lex:<m,..>')
        parser.add_argument('--ceiling', type=int, help='Refuse to enumerate more solutions than this')
        parser.add_argument('--workers', type=int, help='Threads used to realize solutions')
        self.add_output_arguments(parser)

    def run(self, config, options):
        code = codes.resolve(config['code'])
        target, stab_images = load_target(config, code)
        result = lcs.synthesize(
            code, target, stab_images,
            mode=SolveMode(config['mode']),
            metric=config['metric'],
            ceiling=config.get('ceiling'),
            workers=config.get('workers'),
        )
        if config['mode'] == 'count':
            self.emit(f'{result.count}\n', config)
            return

        if config['format'] == 'json':
            self.emit_json({
                'code': str(code),
                'count': result.count,
                'solutions': SolutionSerializer(result.solutions, many=True).data,
            }, config)
            return

        total = len(result.solutions)
        blocks = []
        for position, solution in enumerate(result.solutions, start=1):
            header = describe(solution, position, total)
            if config['format'] == 'qasm':
                header = header.replace('#', '//', 1)
            blocks.append(header + '\n' + emit(solution.circuit, EmitFormat(config['format'])))
        self.emit('\n'.join(blocks), config)
