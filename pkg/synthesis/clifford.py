"""Elementary symplectic matrices, the Bruhat-style decomposition and gate lowering.

A Clifford g acts on Paulis as gamma(g p g^dagger) = gamma(p) F_g, so a
product F_1 F_2 ... F_n of factors is realized by applying the circuit of
F_1 first.
"""
import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import f2core
from .circuit import Circuit, Gate, GateKind, QubitOutOfRange
from .f2core import F2Matrix
from .pauli import PauliElement, from_gamma, parse_pauli, product
from .symplectic import is_symplectic, omega

logger = logging.getLogger(__name__)

__all__ = [
    'NonInvertibleQ', 'NonSymmetricR', 'NotSymplectic', 'DecompositionFailed',
    'FactorKind', 'ElementaryFactor', 'Decomposition', 'Gate', 'GateKind',
    'elementary_matrix', 'decompose', 'recompose', 'lower_factor', 'lower_to_gates',
    'conjugate', 'conjugate_circuit', 'symplectic_action',
]


class NonInvertibleQ(ValueError):
    pass


class NonSymmetricR(ValueError):
    pass


class NotSymplectic(ValueError):
    pass


class DecompositionFailed(RuntimeError):
    pass


class FactorKind(enum.Enum):
    OMEGA = 'omega'
    PERMUTE = 'permute'
    DIAGONAL = 'diagonal'
    PARTIAL_HADAMARD = 'partial-hadamard'


@dataclass(frozen=True, eq=False)
class ElementaryFactor:
    kind: FactorKind
    m: int
    matrix: Optional[F2Matrix] = None
    t: int = 0

    def __post_init__(self):
        if self.kind is FactorKind.PERMUTE:
            if self.matrix is None or self.matrix.shape != (self.m, self.m):
                raise f2core.DimensionMismatch(f'Permute needs an {self.m}x{self.m} matrix')
            if f2core.rank(self.matrix) < self.m:
                raise NonInvertibleQ('Permute factor needs an invertible Q')
        elif self.kind is FactorKind.DIAGONAL:
            if self.matrix is None or self.matrix.shape != (self.m, self.m):
                raise f2core.DimensionMismatch(f'Diagonal needs an {self.m}x{self.m} matrix')
            if not np.array_equal(self.matrix, self.matrix.T):
                raise NonSymmetricR('Diagonal factor needs a symmetric R')
        elif self.kind is FactorKind.PARTIAL_HADAMARD and not 0 <= self.t <= self.m:
            raise f2core.DimensionMismatch(f'partial Hadamard width {self.t} outside 0..{self.m}')

    @classmethod
    def omega(cls, m):
        return cls(FactorKind.OMEGA, m)

    @classmethod
    def permute(cls, q):
        q = f2core.f2matrix(q)
        return cls(FactorKind.PERMUTE, q.shape[0], q)

    @classmethod
    def diagonal(cls, r):
        r = f2core.f2matrix(r)
        return cls(FactorKind.DIAGONAL, r.shape[0], r)

    @classmethod
    def partial_hadamard(cls, m, t):
        return cls(FactorKind.PARTIAL_HADAMARD, m, t=t)


def _blocks(top_left, top_right, bottom_left, bottom_right):
    out = np.block([[top_left, top_right], [bottom_left, bottom_right]]).astype(np.uint8)
    out.setflags(write=False)
    return out


def _permute_block(q, q_inv) -> F2Matrix:
    zero = f2core.zeros(*q.shape)
    return _blocks(q, zero, zero, q_inv.T)


def _diagonal_block(r) -> F2Matrix:
    m = r.shape[0]
    return _blocks(f2core.identity(m), r, f2core.zeros(m, m), f2core.identity(m))


def _hadamard_block(m: int, t: int) -> F2Matrix:
    upper = np.diag([1] * t + [0] * (m - t)).astype(np.uint8)
    lower = f2core.identity(m) ^ upper
    return _blocks(lower, upper, upper, lower)


def elementary_matrix(f: ElementaryFactor) -> F2Matrix:
    if f.kind is FactorKind.OMEGA:
        return omega(f.m)
    if f.kind is FactorKind.PERMUTE:
        return _permute_block(f.matrix, f2core.inverse(f.matrix))
    if f.kind is FactorKind.DIAGONAL:
        return _diagonal_block(f.matrix)
    return _hadamard_block(f.m, f.t)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """F = A_{Q1} Omega T_{R1} G_k T_{R2} A_{Q2}."""
    q1: F2Matrix
    r1: F2Matrix
    k: int
    r2: F2Matrix
    q2: F2Matrix

    @property
    def m(self) -> int:
        return self.q1.shape[0]

    def factors(self) -> List[ElementaryFactor]:
        return [
            ElementaryFactor.permute(self.q1),
            ElementaryFactor.omega(self.m),
            ElementaryFactor.diagonal(self.r1),
            ElementaryFactor.partial_hadamard(self.m, self.k),
            ElementaryFactor.diagonal(self.r2),
            ElementaryFactor.permute(self.q2),
        ]


def recompose(d: Decomposition) -> F2Matrix:
    out = f2core.identity(2 * d.m)
    for factor in d.factors():
        out = f2core.multiply(out, elementary_matrix(factor))
    return out


def decompose(f) -> Decomposition:
    """Split a symplectic matrix into the six elementary factors.

    Row and column reduction bring the top-left block to diag(I_k, 0);
    symplecticity then forces the top-right block into
    [[B11, B12], [0, B22]] with B11 symmetric and B22 invertible, and one
    more row operation clears B12 and B22 down to [[B11, 0], [0, I]].
    """
    f = f2core.f2matrix(f)
    if not is_symplectic(f):
        raise NotSymplectic('matrix does not satisfy F Omega F^T = Omega')
    m = f.shape[0] // 2
    a, b = f[:m, :m], f[:m, m:]

    rows = f2core.row_reduce(a)
    k = len(rows.pivots)
    cols = f2core.row_reduce(rows.rref.T)
    col_op = cols.transform.T
    p = rows.transform

    b_prime = f2core.multiply(f2core.multiply(p, b), f2core.inverse(cols.transform))
    b12, b22 = b_prime[:k, k:], b_prime[k:, k:]
    b22_inv = f2core.inverse(b22)
    fix = np.eye(m, dtype=np.uint8)
    fix[:k, k:] = f2core.multiply(b12, b22_inv)
    fix[k:, k:] = b22_inv
    p = f2core.multiply(fix, p)

    r2 = np.zeros((m, m), dtype=np.uint8)
    r2[:k, :k] = b_prime[:k, :k]
    r2 = f2core.f2matrix(r2)
    q1 = f2core.inverse(p)
    q2 = f2core.inverse(col_op)

    # Omega T_{R1} Omega = A_{Q1}^{-1} F A_{Q2}^{-1} T_{R2} G_k Omega
    middle = f2core.multiply(_permute_block(p, q1), f)
    middle = f2core.multiply(middle, _permute_block(col_op, q2))
    middle = f2core.multiply(middle, _diagonal_block(r2))
    middle = f2core.multiply(middle, _hadamard_block(m, k))
    t_r1 = f2core.multiply(omega(m), middle)
    r1 = t_r1[:m, m:]
    expected = _diagonal_block(r1) if np.array_equal(r1, r1.T) else None
    if expected is None or not np.array_equal(t_r1, expected):
        raise DecompositionFailed('middle factor is not of the form T_R')

    logger.debug('decomposed %dx%d symplectic matrix with k=%d', 2 * m, 2 * m, k)
    return Decomposition(q1, f2core.f2matrix(r1), k, r2, q2)


def _lower_permute(q: F2Matrix) -> List[Gate]:
    """CNOT/SWAP network whose X-part action is a -> a Q.

    Gauss-Jordan on Q^T: a row swap is a SWAP and "row i += row j" is
    CNOT(j, i); the network is the recorded operations in reverse.
    """
    work = np.array(q, dtype=np.uint8).T.copy()
    m = work.shape[0]
    ops: List[Gate] = []
    for j in range(m):
        p = j + int(np.flatnonzero(work[j:, j])[0])
        if p != j:
            work[[j, p]] = work[[p, j]]
            ops.append(Gate(GateKind.SWAP, (j + 1, p + 1)))
        for i in np.flatnonzero(work[:, j]):
            if i != j:
                work[i] ^= work[j]
                ops.append(Gate(GateKind.CNOT, (j + 1, int(i) + 1)))
    return ops[::-1]


def _lower_diagonal(r: F2Matrix) -> List[Gate]:
    m = r.shape[0]
    gates = [Gate(GateKind.P, (q + 1,)) for q in range(m) if r[q, q]]
    gates += [Gate(GateKind.CZ, (q1 + 1, q2 + 1))
              for q1 in range(m) for q2 in range(q1 + 1, m) if r[q1, q2]]
    return gates


def _hadamards(qubits) -> List[Gate]:
    return [Gate(GateKind.H, (q,)) for q in qubits]


def lower_factor(f: ElementaryFactor) -> List[Gate]:
    if f.kind is FactorKind.OMEGA:
        return _hadamards(range(1, f.m + 1))
    if f.kind is FactorKind.PARTIAL_HADAMARD:
        return _hadamards(range(1, f.t + 1))
    if f.kind is FactorKind.DIAGONAL:
        return _lower_diagonal(f.matrix)
    return _lower_permute(f.matrix)


def lower_to_gates(d: Decomposition) -> Circuit:
    """Gates for the six factors, lowered straight from the decomposition's blocks."""
    gates = _lower_permute(d.q1)
    if d.r1.any():
        gates += _hadamards(range(1, d.m + 1)) + _lower_diagonal(d.r1) + _hadamards(range(1, d.k + 1))
    else:
        # Omega G_k is a Hadamard on the qubits G_k leaves alone
        gates += _hadamards(range(d.k + 1, d.m + 1))
    gates += _lower_diagonal(d.r2) + _lower_permute(d.q2)
    return Circuit(d.m, gates)


_GENERATOR_IMAGES = {
    GateKind.H: ('Z', 'X'),
    GateKind.P: ('Y', 'Z'),
    GateKind.X: ('X', '-Z'),
    GateKind.Y: ('-X', '-Z'),
    GateKind.Z: ('-X', 'Z'),
    # two-qubit gates list images of X1, X2, Z1, Z2 (gate operand order)
    GateKind.CNOT: ('XX', 'IX', 'ZI', 'ZZ'),
    GateKind.CZ: ('XZ', 'ZX', 'ZI', 'IZ'),
    GateKind.SWAP: ('IX', 'XI', 'IZ', 'ZI'),
}


def _conjugation_table(images) -> Dict[Tuple[int, ...], Tuple[Tuple[int, ...], Tuple[int, ...], int]]:
    """Image of every Hermitian E(a, b) on the gate's qubits, keyed by (a..., b...).

    Values are (a bits, b bits, phase) of the signed image.
    """
    width = len(images) // 2
    generators = [from_gamma(np.eye(2 * width, dtype=np.uint8)[i]) for i in range(2 * width)]
    image_elements = [parse_pauli(text) for text in images]
    table = {}
    for key in itertools.product((0, 1), repeat=2 * width):
        chosen = [i for i, bit in enumerate(key) if bit]
        before = product([generators[i] for i in chosen], m=width)
        after = product([image_elements[i] for i in chosen], m=width)
        table[key] = (tuple(after.a.tolist()), tuple(after.b.tolist()), (after.phase - before.phase) % 4)
    return table


_TABLES = {kind: _conjugation_table(images) for kind, images in _GENERATOR_IMAGES.items()}


def _conjugate_bits(gate: Gate, a: List[int], b: List[int]) -> int:
    """Rewrite the bit lists in place; returns the phase picked up."""
    idx = [q - 1 for q in gate.qubits]
    image_a, image_b, phase = _TABLES[gate.kind][tuple(a[i] for i in idx) + tuple(b[i] for i in idx)]
    for pos, i in enumerate(idx):
        a[i] = image_a[pos]
        b[i] = image_b[pos]
    return phase


def _check_width(gates, p: PauliElement):
    for gate in gates:
        if max(gate.qubits) > p.m:
            raise QubitOutOfRange(f'gate {gate} acts outside qubits 1..{p.m}')


def conjugate(gate: Gate, p: PauliElement) -> PauliElement:
    """g p g^dagger with exact phase."""
    return conjugate_circuit(Circuit(max(gate.qubits), (gate,)), p)


def conjugate_circuit(c: Circuit, p: PauliElement) -> PauliElement:
    _check_width(c.gates, p)
    a, b = p.a.tolist(), p.b.tolist()
    phase = p.phase
    for gate in c.gates:
        phase += _conjugate_bits(gate, a, b)
    return PauliElement(a, b, phase)


def symplectic_action(c: Circuit) -> F2Matrix:
    basis = np.eye(2 * c.m, dtype=np.uint8)
    return f2core.stack([conjugate_circuit(c, from_gamma(row)).gamma() for row in basis], 2 * c.m)
