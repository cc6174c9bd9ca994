from rest_framework import serializers

from . import f2core
from .circuit import Circuit, Gate
from .lcs import BadMetric, parse_metric


class BitMatrixField(serializers.Field):
    """A GF(2) matrix as a list of 0/1 row strings."""

    def to_representation(self, value):
        return [f2core.format_bits(row) for row in value]

    def to_internal_value(self, data):
        if not isinstance(data, list):
            raise serializers.ValidationError('Expected a list of bit strings')
        try:
            return f2core.parse_matrix('\n'.join(data))
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))


class HexMatrixField(serializers.Field):
    def to_representation(self, value):
        return [f2core.to_hex(row) for row in value]


class GateSerializer(serializers.Serializer):
    kind = serializers.CharField()
    qubits = serializers.ListField(child=serializers.IntegerField(min_value=1), allow_empty=False)

    def to_representation(self, gate):
        return {'kind': gate.kind.value, 'qubits': list(gate.qubits)}

    def validate(self, data):
        try:
            return Gate.of(data['kind'], *data['qubits'])
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))


class MetricsSerializer(serializers.Serializer):
    depth = serializers.IntegerField()
    two_qubit_count = serializers.IntegerField()
    two_qubit_depth = serializers.IntegerField()
    total_gates = serializers.IntegerField()
    qubits_touched = serializers.SerializerMethodField()

    def get_qubits_touched(self, obj):
        return sorted(obj.qubits_touched)


class CircuitSerializer(serializers.Serializer):
    m = serializers.IntegerField(min_value=0)
    gates = GateSerializer(many=True)
    metrics = serializers.SerializerMethodField()

    def get_metrics(self, obj):
        return MetricsSerializer(obj.metrics()).data

    def validate(self, data):
        too_wide = [g for g in data['gates'] if max(g.qubits) > data['m']]
        if too_wide:
            raise serializers.ValidationError(f'gate {too_wide[0]} acts outside qubits 1..{data["m"]}')
        return data

    def create(self, validated_data):
        return Circuit(validated_data['m'], validated_data['gates'])


class DecompositionSerializer(serializers.Serializer):
    q1 = BitMatrixField()
    r1 = BitMatrixField()
    k = serializers.IntegerField()
    r2 = BitMatrixField()
    q2 = BitMatrixField()


class SolutionSerializer(serializers.Serializer):
    index = serializers.IntegerField()
    matrix = HexMatrixField()
    decomposition = DecompositionSerializer()
    circuit = CircuitSerializer()
    correction = GateSerializer(many=True)


class RunConfigSerializer(serializers.Serializer):
    SUBCOMMANDS = ('synth', 'decompose', 'verify', 'solve', 'codes')

    subcommand = serializers.ChoiceField(choices=SUBCOMMANDS)
    code = serializers.CharField(required=False)
    gates = serializers.CharField(required=False, allow_blank=True, trim_whitespace=False)
    table = serializers.CharField(required=False)
    mode = serializers.ChoiceField(choices=['all', 'first', 'count'], default='all')
    metric = serializers.CharField(default='depth')
    format = serializers.ChoiceField(choices=['text', 'json', 'qasm'], default='text')
    ceiling = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    workers = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    output = serializers.CharField(required=False, allow_null=True)

    def validate_metric(self, value):
        try:
            return parse_metric(value)
        except BadMetric as exc:
            raise serializers.ValidationError(str(exc))

    def validate(self, data):
        if data['subcommand'] in ('synth', 'verify'):
            if not data.get('code'):
                raise serializers.ValidationError({'code': 'A code source (builtin:<name> or a file) is required.'})
            given = [name for name in ('gates', 'table') if data.get(name) is not None]
            if len(given) != 1:
                raise serializers.ValidationError('Give exactly one target: --gates or --table.')
        return data
