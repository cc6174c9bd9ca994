"""Logical Clifford synthesis.

Flow: turn the target's action on logical Paulis (and optionally on the
stabilizer generators) into a symplectic constraint system, enumerate its
solutions, lower each one to gates, append a Pauli sign correction and
verify the result.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from django.core.exceptions import ImproperlyConfigured

from . import f2core, symplectic
from .circuit import Circuit, CircuitMetrics, Gate, GateKind, QubitOutOfRange, VerificationReport, verify
from .clifford import Decomposition, conjugate_circuit, decompose, lower_to_gates
from .codes import StabilizerCode, checked, in_stabilizer
from .pauli import PauliElement, format_pauli, parse_pauli, product, single
from .symplectic import ConstraintSystem, SolveMode, symp_inner

logger = logging.getLogger(__name__)


class InconsistentTarget(ValueError):
    pass


class InvalidTargetFile(ValueError):
    pass


class BadMetric(ValueError):
    pass


class SynthesisError(RuntimeError):
    pass


def _setting(name, default):
    try:
        from django.conf import settings
        return getattr(settings, name, default)
    except ImproperlyConfigured:
        return default


@dataclass(frozen=True, eq=False)
class LogicalTarget:
    """Images of each logical X_i and Z_i, as signed k-qubit Paulis."""
    k: int
    images_x: Tuple[PauliElement, ...]
    images_z: Tuple[PauliElement, ...]

    def __post_init__(self):
        object.__setattr__(self, 'images_x', tuple(self.images_x))
        object.__setattr__(self, 'images_z', tuple(self.images_z))
        if len(self.images_x) != self.k or len(self.images_z) != self.k:
            raise InconsistentTarget(f'a {self.k}-qubit target needs {self.k} X and {self.k} Z images')
        for p in self.images_x + self.images_z:
            if p.m != self.k:
                raise InconsistentTarget(f'image {format_pauli(p)} does not act on {self.k} logical qubits')
            if not p.is_hermitian:
                raise InconsistentTarget(f'image {format_pauli(p)} is not Hermitian')
        for i, x in enumerate(self.images_x):
            for j, z in enumerate(self.images_z):
                if symp_inner(x.gamma(), z.gamma()) != int(i == j):
                    raise InconsistentTarget(f"images of X{i + 1} and Z{j + 1} break the commutation relations")
        for letter, group in (('X', self.images_x), ('Z', self.images_z)):
            for i in range(self.k):
                for j in range(i + 1, self.k):
                    if symp_inner(group[i].gamma(), group[j].gamma()):
                        raise InconsistentTarget(f'images of {letter}{i + 1} and {letter}{j + 1} anticommute')


def identity_target(k: int) -> LogicalTarget:
    return LogicalTarget(k, [single(k, i, 'X') for i in range(1, k + 1)],
                         [single(k, i, 'Z') for i in range(1, k + 1)])


def target_from_gates(k: int, gates: Sequence[Gate]) -> LogicalTarget:
    """Conjugation table of a logical gate sequence, gates applied in order."""
    for gate in gates:
        if max(gate.qubits) > k:
            raise QubitOutOfRange(f'logical gate {gate} acts outside logical qubits 1..{k}')
    logical = Circuit(k, gates)
    return LogicalTarget(
        k,
        [conjugate_circuit(logical, single(k, i, 'X')) for i in range(1, k + 1)],
        [conjugate_circuit(logical, single(k, i, 'Z')) for i in range(1, k + 1)],
    )


def lift(code: StabilizerCode, logical: PauliElement) -> PauliElement:
    """Physical operator for a k-qubit logical Pauli: i^{kappa + a.b} prod X_i^{a_i} prod Z_i^{b_i}."""
    if logical.m != code.k:
        raise InconsistentTarget(f'{format_pauli(logical)} is not a {code.k}-qubit logical Pauli')
    factors = [x for x, bit in zip(code.logical_x, logical.a) if bit]
    factors += [z for z, bit in zip(code.logical_z, logical.b) if bit]
    physical = product(factors, m=code.m)
    return physical.with_phase(physical.phase + logical.phase + int(logical.a.astype(int) @ logical.b.astype(int)))


def load_target_table(text: str, code: StabilizerCode):
    """Parse ``X<i> <pauli>`` / ``Z<i> <pauli>`` / ``S<j> <pauli>`` lines.

    X and Z images are k-qubit logical Paulis, S images are physical. Missing
    X/Z lines leave that logical operator fixed; missing S lines leave that
    generator fixed. Returns the target and the stabilizer images, or None
    when the table has no S lines.
    """
    k, r = code.k, code.r
    images = {'X': {}, 'Z': {}, 'S': {}}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        label = parts[0]
        if len(parts) != 2 or label[:1] not in images or not label[1:].isdigit():
            raise InvalidTargetFile(f'line {lineno}: expected "X<i>|Z<i>|S<j> <pauli>", got {line!r}')
        letter, index = label[0], int(label[1:])
        limit = r if letter == 'S' else k
        if not 1 <= index <= limit:
            raise InvalidTargetFile(f'line {lineno}: index {index} outside 1..{limit}')
        try:
            images[letter][index - 1] = parse_pauli(parts[1])
        except ValueError as exc:
            raise InvalidTargetFile(f'line {lineno}: {exc}') from exc

    target = LogicalTarget(
        k,
        [images['X'].get(i, single(k, i + 1, 'X')) for i in range(k)],
        [images['Z'].get(i, single(k, i + 1, 'Z')) for i in range(k)],
    )
    if not images['S']:
        return target, None
    return target, [images['S'].get(j, code.stabilizers[j]) for j in range(r)]


def load_target_file(path, code: StabilizerCode):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidTargetFile(f'cannot read {path}: {exc}') from exc
    return load_target_table(text, code)


def expected_images(code: StabilizerCode, target: LogicalTarget,
                    stab_images: Optional[Sequence[PauliElement]] = None) -> List[Tuple[str, PauliElement, PauliElement]]:
    """(label, source, required image) for every logical Pauli and stabilizer generator."""
    rows = []
    for i in range(code.k):
        rows.append((f'X{i + 1}', code.logical_x[i], lift(code, target.images_x[i])))
    for i in range(code.k):
        rows.append((f'Z{i + 1}', code.logical_z[i], lift(code, target.images_z[i])))
    stab_images = code.stabilizers if stab_images is None else stab_images
    for j, (source, image) in enumerate(zip(code.stabilizers, stab_images)):
        rows.append((f'S{j + 1}', source, image))
    return rows


def _check_stab_images(code, stab_images):
    if len(stab_images) != code.r:
        raise InconsistentTarget(f'{len(stab_images)} stabilizer images given, the code has {code.r} generators')
    for j, image in enumerate(stab_images):
        if image.m != code.m or not in_stabilizer(code, image):
            raise InconsistentTarget(f'image of S{j + 1}, {format_pauli(image)}, is not a stabilizer element')
    if code.r and f2core.rank(f2core.stack([p.gamma() for p in stab_images], 2 * code.m)) < code.r:
        raise InconsistentTarget('stabilizer images do not generate the stabilizer group')


def assemble(code: StabilizerCode, target: LogicalTarget,
             stab_images: Optional[Sequence[PauliElement]] = None) -> ConstraintSystem:
    """Constraint system u_i F = u'_i, v_j F = v'_j for a target on a code.

    u_i is gamma(X_i) for logical i and gamma(S_j) after them; v_i is
    gamma(Z_i). Only the v-slots of the stabilizers are left free, so
    alpha = r.
    """
    checked(code)
    if target.k != code.k:
        raise InconsistentTarget(f'target acts on {target.k} logical qubits, the code encodes {code.k}')
    if stab_images is None:
        stab_images = code.stabilizers
    else:
        _check_stab_images(code, stab_images)

    pairs = [(x.gamma(), z.gamma()) for x, z in zip(code.logical_x, code.logical_z)]
    singles = [s.gamma() for s in code.stabilizers]
    basis = symplectic.complete_basis(pairs, singles, m=code.m)

    images_u = {i: lift(code, target.images_x[i]).gamma() for i in range(code.k)}
    images_u.update({code.k + j: p.gamma() for j, p in enumerate(stab_images)})
    images_v = {i: lift(code, target.images_z[i]).gamma() for i in range(code.k)}
    system = ConstraintSystem(basis.u, basis.v, images_u, images_v)
    try:
        system.validate()
    except (symplectic.IncompatibleInnerProducts, symplectic.DependentInputs) as exc:
        raise InconsistentTarget(str(exc)) from exc
    logger.info('assembled constraints for %s: m=%d k=%d alpha=%d, %d solutions',
                code, code.m, code.k, system.alpha, symplectic.solution_count(system.alpha, system.free_pairs))
    return system


_CORRECTION_GATES = {(1, 0): GateKind.X, (0, 1): GateKind.Z, (1, 1): GateKind.Y}


def fix_signs(circuit: Circuit, code: StabilizerCode, target: LogicalTarget,
              stab_images: Optional[Sequence[PauliElement]] = None,
              report: Optional[VerificationReport] = None) -> List[Gate]:
    """Pauli gates to append so every constraint image comes out with the right sign.

    A trailing Pauli Q flips the sign of an image exactly when Q
    anticommutes with it, so Q solves <gamma(Q), gamma(image_c)> = s_c.
    ``report`` is ``verify(circuit, ...)`` when the caller already has it.
    """
    if report is None:
        report = verify(circuit, code, target, stab_images)
    rows, wrong = [], []
    for check in report.checks:
        if not check.ok and not check.sign_only:
            raise SynthesisError(f'{check.label} maps to {format_pauli(check.actual)}, '
                                 f'expected {format_pauli(check.expected)}')
        rows.append(check.expected.gamma())
        wrong.append(0 if check.ok else 1)
    if not any(wrong):
        return []
    functionals = f2core.stack([np.concatenate([g[code.m:], g[:code.m]]) for g in rows], 2 * code.m)
    try:
        correction = f2core.min_solution(functionals, f2core.f2vector(wrong))
    except f2core.NoSolution as exc:
        raise SynthesisError('no Pauli correction fixes the signs') from exc
    m = code.m
    gates = [Gate(_CORRECTION_GATES[(int(correction[q]), int(correction[m + q]))], (q + 1,))
             for q in range(m) if correction[q] or correction[m + q]]
    logger.debug('sign correction: %s', ' '.join(str(g) for g in gates) or 'none')
    return gates


@dataclass(frozen=True, eq=False)
class Solution:
    index: int
    matrix: f2core.F2Matrix
    decomposition: Decomposition
    circuit: Circuit
    correction: Tuple[Gate, ...]

    @property
    def metrics(self) -> CircuitMetrics:
        return self.circuit.metrics()


class SynthesisResult(NamedTuple):
    count: int
    solutions: List[Solution]


def realize(index: int, matrix, code: StabilizerCode, target: LogicalTarget,
            stab_images: Optional[Sequence[PauliElement]] = None) -> Solution:
    decomposition = decompose(matrix)
    lowered = lower_to_gates(decomposition)
    before = verify(lowered, code, target, stab_images)
    correction = fix_signs(lowered, code, target, stab_images, report=before)
    circuit = lowered.extended(correction)
    report = before.followed_by(Circuit(code.m, correction))
    if not report.ok:
        raise SynthesisError(f'solution {index} fails on {", ".join(c.label for c in report.failures)}')
    logger.debug('solution %d: k=%d, %d gates', index, decomposition.k, len(circuit))
    return Solution(index, matrix, decomposition, circuit, tuple(correction))


def synthesize(code: StabilizerCode, target: LogicalTarget,
               stab_images: Optional[Sequence[PauliElement]] = None,
               mode: SolveMode = SolveMode.ENUMERATE, metric=None,
               ceiling: Optional[int] = None, workers: Optional[int] = None) -> SynthesisResult:
    """Every physical realization of ``target`` on ``code``, verified and ranked.

    In COUNT mode nothing is realized and ``solutions`` is empty.
    """
    started = time.monotonic()
    if ceiling is None:
        ceiling = _setting('LCS_SOLUTION_CEILING', symplectic.DEFAULT_CEILING)
    if workers is None:
        workers = _setting('LCS_WORKERS', 1)

    system = assemble(code, target, stab_images)
    count, matrices = symplectic.solve_all(system, mode=mode, ceiling=ceiling)
    if mode is SolveMode.COUNT:
        return SynthesisResult(count, [])

    def job(item):
        index, matrix = item
        return realize(index, matrix, code, target, stab_images)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            solutions = list(pool.map(job, enumerate(matrices)))
    else:
        solutions = [job(item) for item in enumerate(matrices)]

    if metric is not None:
        solutions = rank(solutions, metric)
    logger.info('synthesized %d solutions for %s in %.3fs', len(solutions), code, time.monotonic() - started)
    return SynthesisResult(count, solutions)


@dataclass(frozen=True)
class Depth:
    def key(self, metrics: CircuitMetrics):
        return (metrics.depth, metrics.two_qubit_count)


@dataclass(frozen=True)
class TwoQubitCount:
    def key(self, metrics: CircuitMetrics):
        return (metrics.two_qubit_count,)


@dataclass(frozen=True)
class TwoQubitDepth:
    def key(self, metrics: CircuitMetrics):
        return (metrics.two_qubit_depth, metrics.two_qubit_count)


@dataclass(frozen=True)
class AvoidQubits:
    qubits: frozenset

    def key(self, metrics: CircuitMetrics):
        return (len(metrics.qubits_touched & self.qubits), metrics.two_qubit_count)


@dataclass(frozen=True)
class Lexicographic:
    metrics: tuple

    def key(self, metrics: CircuitMetrics):
        return tuple(part for metric in self.metrics for part in metric.key(metrics))


_SIMPLE_METRICS = {
    'depth': Depth,
    'two-qubit': TwoQubitCount,
    'two-qubit-depth': TwoQubitDepth,
}


def parse_metric(text: str):
    """``depth``, ``two-qubit``, ``two-qubit-depth``, ``avoid:1,3`` or ``lex:depth,two-qubit``."""
    text = text.strip()
    if text in _SIMPLE_METRICS:
        return _SIMPLE_METRICS[text]()
    name, _, arg = text.partition(':')
    if name == 'avoid' and arg:
        try:
            return AvoidQubits(frozenset(int(q) for q in arg.split(',')))
        except ValueError:
            raise BadMetric(f'avoid needs a comma-separated qubit list, got {arg!r}') from None
    if name == 'lex' and arg:
        parts = [p.strip() for p in arg.split(',')]
        if any(p not in _SIMPLE_METRICS for p in parts):
            raise BadMetric(f'lex accepts only {", ".join(_SIMPLE_METRICS)}, got {arg!r}')
        return Lexicographic(tuple(_SIMPLE_METRICS[p]() for p in parts))
    raise BadMetric(f'unknown metric {text!r}')


def rank(solutions: Sequence[Solution], metric) -> List[Solution]:
    """Stable sort, so ties keep their input order."""
    return sorted(solutions, key=lambda s: metric.key(s.metrics))

