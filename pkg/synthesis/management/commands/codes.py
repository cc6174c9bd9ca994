from ... import codes
from ..base import LcsCommand


class Command(LcsCommand):
    help = 'List the builtin stabilizer codes, or print one in code file format'
    subcommand = 'codes'

    def add_arguments(self, parser):
        parser.add_argument('--show', help='Name of a builtin code to print')
        parser.add_argument('--output', help='Write to this file instead of stdout')

    def run(self, config, options):
        if options.get('show'):
            self.emit(codes.dumps_code(codes.builtin(options['show'])), config)
            return
        lines = []
        for name in sorted(codes.BUILTINS):
            code = codes.builtin(name)
            lines.append(f'{name:<5} {code}  m={code.m} k={code.k} r={code.r}')
        self.emit('\n'.join(lines) + '\n', config)
