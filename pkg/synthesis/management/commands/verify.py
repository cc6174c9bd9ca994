import json

from django.core.management.base import CommandError

from ... import codes
from ...circuit import parse, verify
from ...pauli import format_pauli
from ...serializers import CircuitSerializer
from ..base import EXIT_BAD_INPUT, EXIT_VERIFICATION_FAILED, LcsCommand, read_input
from .synth import load_target


def load_circuit(text, m):
    """Text gate list, or the JSON document that --format json writes."""
    if text.lstrip().startswith('{'):
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CommandError(f'bad circuit JSON: {exc}', returncode=EXIT_BAD_INPUT) from exc
        serializer = CircuitSerializer(data=payload)
        if not serializer.is_valid():
            raise CommandError(f'bad circuit JSON: {serializer.errors}', returncode=EXIT_BAD_INPUT)
        return serializer.save()
    return parse(text, m=m)


class Command(LcsCommand):
    help = 'Check a circuit against a code and a logical target, sign included'
    subcommand = 'verify'

    def add_arguments(self, parser):
        parser.add_argument('circuit', help='Circuit file (text gate list or JSON)')
        parser.add_argument('--code', help='builtin:<name> or a code definition file')
        parser.add_argument('--gates', help='Logical gate list, e.g. "CZ 1 2"')
        parser.add_argument('--table', help='Conjugation-table target file')
        parser.add_argument('--output', help='Write the report to this file instead of stdout')

    def run(self, config, options):
        code = codes.resolve(config['code'])
        target, stab_images = load_target(config, code)
        circuit = load_circuit(read_input(options['circuit']), code.m)
        report = verify(circuit, code, target, stab_images)

        lines = []
        for check in report.checks:
            if check.ok:
                status = 'ok'
            elif check.sign_only:
                status = 'FAIL (sign)'
            else:
                status = 'FAIL'
            lines.append(f'{check.label:<4} {format_pauli(check.source)} -> {format_pauli(check.actual)} '
                         f'expected {format_pauli(check.expected)}  {status}')
        lines.append('verified' if report.ok else 'not verified')
        self.emit('\n'.join(lines) + '\n', config)
        if not report.ok:
            failed = ', '.join(check.label for check in report.failures)
            raise CommandError(f'circuit fails on {failed}', returncode=EXIT_VERIFICATION_FAILED)
