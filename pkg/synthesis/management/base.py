import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from .. import codes, lcs, symplectic
from ..clifford import NotSymplectic
from ..serializers import RunConfigSerializer

EXIT_BAD_INPUT = 1
EXIT_INVALID_CODE = 2
EXIT_INCONSISTENT = 3
EXIT_CEILING = 4
EXIT_VERIFICATION_FAILED = 5

_EXIT_CODES = (
    (symplectic.CeilingExceeded, EXIT_CEILING),
    ((codes.InvalidCode, codes.UnknownCode, NotSymplectic), EXIT_INVALID_CODE),
    ((lcs.InconsistentTarget, symplectic.IncompatibleInnerProducts,
      symplectic.DependentInputs, symplectic.InconsistentInput), EXIT_INCONSISTENT),
)


def exit_code_for(exc: Exception) -> int:
    for kinds, code in _EXIT_CODES:
        if isinstance(exc, kinds):
            return code
    return EXIT_BAD_INPUT


def read_input(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CommandError(f'cannot read {path}: {exc}', returncode=EXIT_BAD_INPUT) from exc


class LcsCommand(BaseCommand):
    """Validates options with RunConfigSerializer and maps domain errors to exit codes."""
    subcommand = None

    def add_output_arguments(self, parser, formats=('text', 'json', 'qasm')):
        parser.add_argument('--format', choices=formats, default='text', help='Output format')
        parser.add_argument('--output', help='Write to this file instead of stdout')

    def validated_config(self, options):
        data = {key: value for key, value in options.items()
                if key in RunConfigSerializer().fields and value is not None}
        data['subcommand'] = self.subcommand
        serializer = RunConfigSerializer(data=data)
        if not serializer.is_valid():
            raise CommandError(self.format_errors(serializer.errors), returncode=EXIT_BAD_INPUT)
        return serializer.validated_data

    @staticmethod
    def format_errors(errors):
        parts = []
        for field, messages in errors.items():
            prefix = '' if field == 'non_field_errors' else f'{field}: '
            parts.extend(prefix + str(message) for message in messages)
        return '; '.join(parts)

    def handle(self, *args, **options):
        config = self.validated_config(options)
        try:
            self.run(config, options)
        except CommandError:
            raise
        except ValueError as exc:
            raise CommandError(str(exc), returncode=exit_code_for(exc)) from exc

    def run(self, config, options):
        raise NotImplementedError

    def emit(self, text, config):
        output = config.get('output')
        if output:
            Path(output).write_text(text)
        else:
            self.stdout.write(text, ending='')

    def emit_json(self, payload, config):
        self.emit(json.dumps(payload, indent=2) + '\n', config)
