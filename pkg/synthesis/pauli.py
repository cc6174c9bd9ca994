"""Phase-tracked Pauli operators.

An element is stored as ``i**phase * E(a, b)`` where E(a, b) = i^{a.b} X^a Z^b
is the Hermitian representative of its class. E is multiplicative over
tensor factors, so a single qubit with a=b=1 is exactly the Hermitian Y.
"""
import re

import numpy as np

from . import f2core
from .symplectic import symp_inner


class BadCharacter(ValueError):
    pass


class BadSign(ValueError):
    pass


_SIGNS = {'': 0, '+': 0, '+i': 1, 'i': 1, '-': 2, '-i': 3}
_SIGN_TEXT = {0: '', 1: '+i', 2: '-', 3: '-i'}
_LETTERS = {'I': (0, 0), 'X': (1, 0), 'Z': (0, 1), 'Y': (1, 1)}
_PAULI_RE = re.compile(r'^(?P<sign>[^IXYZ]*)(?P<body>.*)$')


class PauliElement:
    __slots__ = ('a', 'b', 'phase')

    def __init__(self, a, b, phase=0):
        a = f2core.f2vector(a)
        b = f2core.f2vector(b)
        if a.shape != b.shape:
            raise f2core.DimensionMismatch(f'X part has length {a.size}, Z part {b.size}')
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'phase', int(phase) % 4)

    def __setattr__(self, name, value):
        raise AttributeError('PauliElement is immutable')

    @property
    def m(self) -> int:
        return int(self.a.size)

    def __eq__(self, other):
        if not isinstance(other, PauliElement):
            return NotImplemented
        return (self.phase == other.phase and np.array_equal(self.a, other.a)
                and np.array_equal(self.b, other.b))

    def __hash__(self):
        return hash((self.phase, self.a.tobytes(), self.b.tobytes()))

    def __repr__(self):
        return f'PauliElement({format_pauli(self)!r})'

    def __str__(self):
        return format_pauli(self)

    def __mul__(self, other):
        return multiply(self, other)

    def __neg__(self):
        return PauliElement(self.a, self.b, self.phase + 2)

    def gamma(self):
        """Symplectic vector [a, b]; phases are dropped."""
        return f2core.f2vector(np.concatenate([self.a, self.b]))

    def with_phase(self, phase):
        return PauliElement(self.a, self.b, phase)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> int:
        """+1 or -1 for Hermitian elements."""
        if not self.is_hermitian:
            raise BadSign(f'{format_pauli(self)} is not Hermitian')
        return 1 if self.phase == 0 else -1

    def support(self):
        """1-based qubits on which the element acts non-trivially."""
        return frozenset(int(q) + 1 for q in np.flatnonzero(self.a | self.b))

    def weight(self) -> int:
        return len(self.support())


def identity(m):
    return PauliElement(np.zeros(m, dtype=np.uint8), np.zeros(m, dtype=np.uint8))


def from_gamma(vector, phase=0):
    vector = f2core.f2vector(vector)
    if vector.size % 2:
        raise f2core.DimensionMismatch(f'symplectic vectors have even length, got {vector.size}')
    m = vector.size // 2
    return PauliElement(vector[:m], vector[m:], phase)


def single(m, qubit, letter):
    """Single-qubit Pauli ``letter`` on 1-based ``qubit`` of an m-qubit register."""
    if letter not in _LETTERS:
        raise BadCharacter(f'unknown Pauli letter {letter!r}')
    if not 1 <= qubit <= m:
        raise f2core.DimensionMismatch(f'qubit {qubit} outside 1..{m}')
    a = np.zeros(m, dtype=np.uint8)
    b = np.zeros(m, dtype=np.uint8)
    a[qubit - 1], b[qubit - 1] = _LETTERS[letter]
    return PauliElement(a, b)


def _check_same_size(p, q):
    if p.m != q.m:
        raise f2core.DimensionMismatch(f'{p.m}-qubit and {q.m}-qubit Paulis')


def multiply(p: PauliElement, q: PauliElement) -> PauliElement:
    """Product p q with exact phase.

    E(a,b) E(a',b') = i^{ab + a'b' + 2a'b - (a+a')(b+b')} E(a+a', b+b'),
    where the sums in the last term are the XORs, dotted over the integers.
    """
    _check_same_size(p, q)
    a, b, a2, b2 = (v.astype(np.int64) for v in (p.a, p.b, q.a, q.b))
    a_sum = a ^ a2
    b_sum = b ^ b2
    exponent = a @ b + a2 @ b2 + 2 * (a2 @ b) - a_sum @ b_sum
    return PauliElement(a_sum, b_sum, p.phase + q.phase + int(exponent))


def product(elements, m=None):
    """Ordered product of an iterable of Paulis; the identity when empty."""
    result = None
    for element in elements:
        result = element if result is None else multiply(result, element)
    if result is None:
        if m is None:
            raise f2core.DimensionMismatch('size of an empty product is unknown')
        return identity(m)
    return result


def commutes(p: PauliElement, q: PauliElement) -> bool:
    _check_same_size(p, q)
    return symp_inner(p.gamma(), q.gamma()) == 0


def parse_pauli(text: str) -> PauliElement:
    """Parse ``sign? [IXYZ]+`` with sign one of +, -, +i, -i (also bare i)."""
    text = text.strip()
    match = _PAULI_RE.match(text)
    sign, body = match.group('sign'), match.group('body')
    if sign not in _SIGNS:
        raise BadSign(f'bad sign prefix {sign!r} in {text!r}')
    if not body:
        raise BadCharacter(f'no Pauli letters in {text!r}')
    bad = set(body) - set(_LETTERS)
    if bad:
        raise BadCharacter(f'unexpected characters {"".join(sorted(bad))!r} in {text!r}')
    a = [_LETTERS[ch][0] for ch in body]
    b = [_LETTERS[ch][1] for ch in body]
    return PauliElement(a, b, _SIGNS[sign])


def format_pauli(p: PauliElement) -> str:
    letters = {v: k for k, v in _LETTERS.items()}
    body = ''.join(letters[(int(x), int(z))] for x, z in zip(p.a, p.b))
    return _SIGN_TEXT[p.phase] + body
