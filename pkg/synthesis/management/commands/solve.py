from django.conf import settings

from ... import f2core, symplectic
from ...symplectic import SolveMode
from ..base import LcsCommand, read_input


class Command(LcsCommand):
    help = 'Find symplectic matrices F with x F = y for every "<x> -> <y>" line of a constraint file'
    subcommand = 'solve'

    def add_arguments(self, parser):
        parser.add_argument('constraints', help='File of "<bits> -> <bits>" lines')
        parser.add_argument('--mode', choices=['all', 'first', 'count'], default='all')
        parser.add_argument('--ceiling', type=int, help='Refuse to enumerate more solutions than this')
        parser.add_argument('--output', help='Write to this file instead of stdout')

    def run(self, config, options):
        xs, ys = symplectic.parse_constraints(read_input(options['constraints']))
        system = symplectic.system_from_pairs(xs, ys)
        ceiling = config.get('ceiling') or settings.LCS_SOLUTION_CEILING
        count, matrices = symplectic.solve_all(system, mode=SolveMode(config['mode']), ceiling=ceiling)
        if config['mode'] == 'count':
            self.emit(f'{count}\n', config)
            return
        blocks = []
        for index, matrix in enumerate(matrices, start=1):
            rows = '\n'.join(f2core.to_hex(row) for row in matrix)
            blocks.append(f'# solution {index}\n{rows}\n')
        self.emit('\n'.join(blocks), config)
