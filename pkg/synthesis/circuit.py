"""Gate-list circuits: construction, parsing, metrics, verification and emission.

Qubits are labelled 1..m everywhere except in QASM output, which is 0-based.
"""
import enum
import json
import logging
import re
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple

logger = logging.getLogger(__name__)


class QubitOutOfRange(ValueError):
    pass


class BadGate(ValueError):
    pass


class GateKind(enum.Enum):
    H = 'H'
    P = 'P'
    CNOT = 'CNOT'
    CZ = 'CZ'
    SWAP = 'SWAP'
    X = 'X'
    Y = 'Y'
    Z = 'Z'

    @property
    def arity(self) -> int:
        return 2 if self in (GateKind.CNOT, GateKind.CZ, GateKind.SWAP) else 1

    @property
    def is_pauli(self) -> bool:
        return self in (GateKind.X, GateKind.Y, GateKind.Z)


_ALIASES = {'S': GateKind.P, 'CX': GateKind.CNOT}

_QASM_NAMES = {
    GateKind.H: 'h',
    GateKind.P: 's',
    GateKind.CNOT: 'cx',
    GateKind.CZ: 'cz',
    GateKind.SWAP: 'swap',
    GateKind.X: 'x',
    GateKind.Y: 'y',
    GateKind.Z: 'z',
}


def gate_kind(name: str) -> GateKind:
    key = name.strip().upper()
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return GateKind(key)
    except ValueError:
        raise BadGate(f'unknown gate {name!r}') from None


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'qubits', tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.kind.arity:
            raise BadGate(f'{self.kind.value} takes {self.kind.arity} qubit(s), got {len(self.qubits)}')
        if len(set(self.qubits)) != len(self.qubits):
            raise BadGate(f'{self.kind.value} needs distinct qubits, got {self.qubits}')
        if any(q < 1 for q in self.qubits):
            raise QubitOutOfRange(f'qubit labels start at 1, got {self.qubits}')

    @classmethod
    def of(cls, name, *qubits):
        return cls(gate_kind(name), qubits)

    def __str__(self):
        return ' '.join([self.kind.value] + [str(q) for q in self.qubits])


@dataclass(frozen=True)
class CircuitMetrics:
    depth: int
    two_qubit_count: int
    total_gates: int
    qubits_touched: FrozenSet[int]
    two_qubit_depth: int


@dataclass(frozen=True)
class Circuit:
    m: int
    gates: Tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        for gate in self.gates:
            if max(gate.qubits) > self.m:
                raise QubitOutOfRange(f'gate {gate} acts outside qubits 1..{self.m}')

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: 'Circuit') -> 'Circuit':
        if other.m != self.m:
            raise QubitOutOfRange(f'cannot join a {self.m}-qubit and a {other.m}-qubit circuit')
        return Circuit(self.m, self.gates + other.gates)

    def extended(self, gates: Iterable[Gate]) -> 'Circuit':
        return Circuit(self.m, self.gates + tuple(gates))

    def metrics(self) -> CircuitMetrics:
        return metrics(self)


def _layered_depth(gates: Iterable[Gate]) -> int:
    level = {}
    depth = 0
    for gate in gates:
        layer = max(level.get(q, 0) for q in gate.qubits) + 1
        for q in gate.qubits:
            level[q] = layer
        depth = max(depth, layer)
    return depth


def metrics(circuit: Circuit) -> CircuitMetrics:
    two_qubit = [g for g in circuit.gates if g.kind.arity == 2]
    return CircuitMetrics(
        depth=_layered_depth(circuit.gates),
        two_qubit_count=len(two_qubit),
        total_gates=len(circuit.gates),
        qubits_touched=frozenset(q for g in circuit.gates for q in g.qubits),
        two_qubit_depth=_layered_depth(two_qubit),
    )


def parse_gates(text: str) -> List[Gate]:
    """Read gates from text such as ``"H 1; CNOT 1 2; P 2"``.

    Gates may be separated by semicolons, newlines or plain whitespace;
    ``#`` starts a comment that runs to the end of the line.
    """
    tokens = []
    for line in text.splitlines():
        tokens.extend(line.split('#', 1)[0].replace(';', ' ').split())
    gates = []
    pos = 0
    while pos < len(tokens):
        kind = gate_kind(tokens[pos])
        operands = tokens[pos + 1:pos + 1 + kind.arity]
        if len(operands) < kind.arity or not all(re.fullmatch(r'\d+', t) for t in operands):
            raise BadGate(f'{kind.value} expects {kind.arity} qubit index(es) after position {pos}')
        gates.append(Gate(kind, tuple(int(t) for t in operands)))
        pos += 1 + kind.arity
    return gates


def parse(text: str, m: Optional[int] = None) -> Circuit:
    """Parse the text grammar; ``m`` defaults to the largest qubit mentioned.

    Text output carries no width line, so idle high qubits come back only
    when ``m`` is passed.
    """
    gates = parse_gates(text)
    if m is None:
        m = max((max(g.qubits) for g in gates), default=0)
    return Circuit(m, gates)


class EmitFormat(enum.Enum):
    TEXT = 'text'
    JSON = 'json'
    QASM = 'qasm'


def emit(circuit: Circuit, fmt: EmitFormat = EmitFormat.TEXT) -> str:
    fmt = EmitFormat(fmt)
    if fmt is EmitFormat.TEXT:
        return ''.join(f'{gate}\n' for gate in circuit.gates)
    if fmt is EmitFormat.JSON:
        from .serializers import CircuitSerializer
        return json.dumps(CircuitSerializer(circuit).data, indent=2) + '\n'
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f'qreg q[{circuit.m}];']
    for gate in circuit.gates:
        operands = ','.join(f'q[{q - 1}]' for q in gate.qubits)
        lines.append(f'{_QASM_NAMES[gate.kind]} {operands};')
    return '\n'.join(lines) + '\n'


@dataclass(frozen=True)
class ConstraintCheck:
    label: str
    source: object
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.actual == self.expected

    @property
    def sign_only(self) -> bool:
        """True when the image is right up to a sign."""
        return not self.ok and bool((self.actual.gamma() == self.expected.gamma()).all())


@dataclass(frozen=True)
class VerificationReport:
    checks: Tuple[ConstraintCheck, ...]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    @property
    def failures(self) -> Tuple[ConstraintCheck, ...]:
        return tuple(check for check in self.checks if not check.ok)

    def followed_by(self, tail: 'Circuit') -> 'VerificationReport':
        """Report for the checked circuit with ``tail`` appended.

        Only ``tail`` is conjugated through; the images already found are reused.
        """
        from .clifford import conjugate_circuit

        return VerificationReport(tuple(
            ConstraintCheck(check.label, check.source, check.expected, conjugate_circuit(tail, check.actual))
            for check in self.checks
        ))


def verify(circuit: Circuit, code, target, stab_images=None) -> VerificationReport:
    """Conjugate every stabilizer generator and logical Pauli through the circuit.

    Mismatches are reported, never raised.
    """
    from .clifford import conjugate_circuit
    from .lcs import expected_images

    checks = []
    for label, source, expected in expected_images(code, target, stab_images):
        checks.append(ConstraintCheck(label, source, expected, conjugate_circuit(circuit, source)))
    report = VerificationReport(tuple(checks))
    logger.debug('verified %d constraints, %d failures', len(checks), len(report.failures))
    return report
