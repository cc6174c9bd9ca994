"""Stabilizer codes: the model, validation, a builtin registry and the code file format.

Code file grammar (``#`` starts a comment, blank lines are ignored)::

    m k
    stab <pauli>     (r = m - k lines)
    logx <pauli>     (k lines)
    logz <pauli>     (k lines)
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from . import f2core
from .pauli import PauliElement, format_pauli, parse_pauli, product
from .symplectic import symp_inner

logger = logging.getLogger(__name__)


class UnknownCode(ValueError):
    pass


class InvalidCode(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__('; '.join(v.message for v in self.violations) or 'invalid code')


class InvalidCodeFile(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class StabilizerCode:
    m: int
    k: int
    stabilizers: Tuple[PauliElement, ...]
    logical_x: Tuple[PauliElement, ...]
    logical_z: Tuple[PauliElement, ...]
    name: str = ''

    def __post_init__(self):
        for attr in ('stabilizers', 'logical_x', 'logical_z'):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))

    @property
    def r(self) -> int:
        return self.m - self.k

    def stabilizer_matrix(self):
        """G_S: one row gamma(S_j) per generator."""
        return f2core.stack([s.gamma() for s in self.stabilizers], 2 * self.m)

    def __str__(self):
        return self.name or f'[[{self.m},{self.k}]]'


class Violation(NamedTuple):
    kind: str
    message: str
    items: Tuple[str, ...]


def _labelled(code):
    out = [(f'S{j + 1}', s) for j, s in enumerate(code.stabilizers)]
    out += [(f'X{i + 1}', x) for i, x in enumerate(code.logical_x)]
    out += [(f'Z{i + 1}', z) for i, z in enumerate(code.logical_z)]
    return out


def validate(code: StabilizerCode) -> List[Violation]:
    """Every broken code invariant, each naming the offending operators."""
    violations = []
    labelled = _labelled(code)

    for label, p in labelled:
        if p.m != code.m:
            violations.append(Violation('size', f'{label} acts on {p.m} qubits, expected {code.m}', (label,)))
        elif not p.is_hermitian:
            violations.append(Violation('phase', f'{label} = {format_pauli(p)} is not Hermitian', (label,)))
    if not 0 <= code.k <= code.m:
        violations.append(Violation('size', f'k = {code.k} outside 0..{code.m}', ()))
    if len(code.stabilizers) != code.r:
        violations.append(Violation('size', f'{len(code.stabilizers)} stabilizers, expected r = {code.r}', ()))
    if len(code.logical_x) != code.k or len(code.logical_z) != code.k:
        violations.append(Violation(
            'size', f'{len(code.logical_x)} X and {len(code.logical_z)} Z logicals, expected k = {code.k}', (),
        ))
    if violations:
        return violations

    stabs = [(f'S{j + 1}', s) for j, s in enumerate(code.stabilizers)]
    for a, (la, sa) in enumerate(stabs):
        for lb, sb in stabs[a + 1:]:
            if symp_inner(sa.gamma(), sb.gamma()):
                violations.append(Violation('anticommuting-stabilizers', f'{la} and {lb} anticommute', (la, lb)))
    if stabs and f2core.rank(code.stabilizer_matrix()) < code.r:
        violations.append(Violation(
            'dependent-stabilizers', 'stabilizer generators are linearly dependent', tuple(l for l, _ in stabs),
        ))

    logicals = labelled[len(stabs):]
    for ll, lp in logicals:
        for ls, sp in stabs:
            if symp_inner(lp.gamma(), sp.gamma()):
                violations.append(Violation('logical-anticommutes', f'{ll} anticommutes with {ls}', (ll, ls)))
    for i, x in enumerate(code.logical_x):
        for j, z in enumerate(code.logical_z):
            if symp_inner(x.gamma(), z.gamma()) != int(i == j):
                relation = 'anticommute' if i == j else 'commute'
                violations.append(Violation(
                    'logical-pairing', f'X{i + 1} and Z{j + 1} must {relation}', (f'X{i + 1}', f'Z{j + 1}'),
                ))
    for letter, group in (('X', code.logical_x), ('Z', code.logical_z)):
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if symp_inner(group[i].gamma(), group[j].gamma()):
                    violations.append(Violation(
                        'logical-pairing', f'{letter}{i + 1} and {letter}{j + 1} anticommute',
                        (f'{letter}{i + 1}', f'{letter}{j + 1}'),
                    ))
    return violations


def checked(code: StabilizerCode) -> StabilizerCode:
    violations = validate(code)
    if violations:
        raise InvalidCode(violations)
    return code


def stabilizer_element(code: StabilizerCode, p: PauliElement) -> Optional[Tuple[Tuple[int, ...], PauliElement]]:
    """Express gamma(p) through the generators.

    Returns the generator exponents and the signed product they give, or
    None when gamma(p) is outside the span of G_S.
    """
    if not code.stabilizers:
        return ((), p.with_phase(0)) if not p.gamma().any() else None
    try:
        coefficients = f2core.solve_affine(code.stabilizer_matrix().T, p.gamma()).particular
    except f2core.NoSolution:
        return None
    chosen = [s for s, c in zip(code.stabilizers, coefficients) if c]
    return tuple(int(c) for c in coefficients), product(chosen, m=code.m)


def in_stabilizer(code: StabilizerCode, p: PauliElement) -> bool:
    """True when p, sign included, is an element of the stabilizer group."""
    found = stabilizer_element(code, p)
    return found is not None and found[1] == p


def _from_strings(name, stabilizers, logical_x, logical_z):
    stabs = [parse_pauli(s) for s in stabilizers]
    xs = [parse_pauli(s) for s in logical_x]
    zs = [parse_pauli(s) for s in logical_z]
    m = stabs[0].m if stabs else xs[0].m
    return checked(StabilizerCode(m, len(xs), stabs, xs, zs, name=name))


def _code_422():
    return _from_strings('[[4,2,2]]', ['XXXX', 'ZZZZ'], ['XXII', 'XIXI'], ['IZIZ', 'IIZZ'])


def _code_642():
    xs = ['X' + ''.join('X' if q == j else 'I' for q in range(1, 6)) for j in range(1, 5)]
    zs = ['I' + ''.join('Z' if q in (j, 5) else 'I' for q in range(1, 6)) for j in range(1, 5)]
    return _from_strings('[[6,4,2]]', ['XXXXXX', 'ZZZZZZ'], xs, zs)


def _code_513():
    return _from_strings('[[5,1,3]]', ['XZZXI', 'IXZZX', 'XIXZZ', 'ZXIXZ'], ['XXXXX'], ['ZZZZZ'])


def _code_211():
    return _from_strings('[[2,1,1]]', ['ZZ'], ['XX'], ['ZI'])


def _code_713():
    rows = ['IIIXXXX', 'IXXIIXX', 'XIXIXIX']
    return _from_strings(
        '[[7,1,3]]', rows + [r.replace('X', 'Z') for r in rows], ['XXXXXXX'], ['ZZZZZZZ'],
    )


BUILTINS: Dict[str, Callable[[], StabilizerCode]] = {
    '211': _code_211,
    '422': _code_422,
    '513': _code_513,
    '642': _code_642,
    '713': _code_713,
}


def builtin(name: str) -> StabilizerCode:
    key = name.strip()
    if key.startswith('builtin:'):
        key = key[len('builtin:'):]
    try:
        factory = BUILTINS[key]
    except KeyError:
        raise UnknownCode(f'no builtin code named {name!r}; choose from {", ".join(sorted(BUILTINS))}') from None
    return factory()


def loads_code(text: str, name: str = '') -> StabilizerCode:
    """Parse the code file grammar. The result is not validated."""
    header = None
    sections = {'stab': [], 'logx': [], 'logz': []}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise InvalidCodeFile(f'line {lineno}: expected header "m k", got {line!r}')
            header = (int(parts[0]), int(parts[1]))
            continue
        if len(parts) != 2 or parts[0] not in sections:
            raise InvalidCodeFile(f'line {lineno}: expected "stab|logx|logz <pauli>", got {line!r}')
        try:
            sections[parts[0]].append(parse_pauli(parts[1]))
        except ValueError as exc:
            raise InvalidCodeFile(f'line {lineno}: {exc}') from exc
    if header is None:
        raise InvalidCodeFile('missing "m k" header')
    m, k = header
    return StabilizerCode(m, k, sections['stab'], sections['logx'], sections['logz'], name=name)


def load_code(path) -> StabilizerCode:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InvalidCodeFile(f'cannot read {path}: {exc}') from exc
    code = loads_code(text, name=path.stem)
    logger.debug('loaded code %s from %s: m=%d k=%d', code.name, path, code.m, code.k)
    return code


def dumps_code(code: StabilizerCode) -> str:
    lines = [f'{code.m} {code.k}']
    lines += [f'stab {format_pauli(s)}' for s in code.stabilizers]
    lines += [f'logx {format_pauli(x)}' for x in code.logical_x]
    lines += [f'logz {format_pauli(z)}' for z in code.logical_z]
    return '\n'.join(lines) + '\n'


def resolve(source: str) -> StabilizerCode:
    """A code from ``builtin:<name>`` or a code file path; always validated."""
    if source.startswith('builtin:'):
        return builtin(source)
    return checked(load_code(source))
