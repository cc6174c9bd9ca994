"""Dense matrix and vector arithmetic over GF(2).

Matrices and vectors are numpy ``uint8`` arrays holding 0/1 entries in row
major order. Every public function returns read-only arrays, so values can
be shared freely; copy before mutating.
"""
import logging
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

F2Matrix = np.ndarray
F2Vector = np.ndarray


class DimensionMismatch(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


class NoSolution(ValueError):
    pass


class RowReduction(NamedTuple):
    rref: F2Matrix
    pivots: Tuple[int, ...]
    transform: F2Matrix


class AffineSolution(NamedTuple):
    particular: F2Vector
    kernel: Tuple[F2Vector, ...]

    def solutions(self):
        """Yield every vector of the affine set, particular + span(kernel)."""
        for mask in range(1 << len(self.kernel)):
            x = self.particular.copy()
            for i, k in enumerate(self.kernel):
                if mask >> i & 1:
                    x ^= k
            yield _freeze(x)


def _freeze(arr):
    arr.setflags(write=False)
    return arr


def f2matrix(data, cols=None):
    """Build a read-only GF(2) matrix from nested sequences (entries taken mod 2)."""
    arr = np.array(data, dtype=np.int64) % 2
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, cols or 0)
    if arr.ndim != 2:
        raise DimensionMismatch(f'expected a 2-d array, got shape {arr.shape}')
    return _freeze(arr.astype(np.uint8))


def f2vector(data):
    arr = np.array(data, dtype=np.int64).reshape(-1) % 2
    return _freeze(arr.astype(np.uint8))


def identity(n):
    return _freeze(np.eye(n, dtype=np.uint8))


def zeros(rows, cols=None):
    shape = (rows,) if cols is None else (rows, cols)
    return _freeze(np.zeros(shape, dtype=np.uint8))


def stack(vectors: Sequence[F2Vector], width: int):
    """Stack row vectors into a matrix; an empty sequence gives a 0 x width matrix."""
    if not vectors:
        return zeros(0, width)
    return _freeze(np.vstack([np.asarray(v, dtype=np.uint8) for v in vectors]))


def multiply(a, b):
    """Matrix (or vector-matrix) product over GF(2)."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    inner_a = a.shape[-1]
    inner_b = b.shape[0]
    if inner_a != inner_b:
        raise DimensionMismatch(f'cannot multiply {a.shape} by {b.shape}')
    # uint8 accumulation wraps mod 256, which preserves parity
    return _freeze((a @ b) & 1)


def add(a, b):
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise DimensionMismatch(f'cannot add {a.shape} and {b.shape}')
    return _freeze(a ^ b)


def row_reduce(a) -> RowReduction:
    """Gauss-Jordan elimination with lowest-index pivot selection.

    Returns the reduced row echelon form, the pivot columns and the
    invertible transform with ``transform @ a == rref``.
    """
    a = np.asarray(a, dtype=np.uint8)
    if a.ndim != 2:
        raise DimensionMismatch(f'expected a 2-d array, got shape {a.shape}')
    rows, cols = a.shape
    work = np.concatenate([a & 1, np.eye(rows, dtype=np.uint8)], axis=1)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(work[r:, c])
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            work[[r, p]] = work[[p, r]]
        mask = work[:, c].astype(bool)
        mask[r] = False
        work[mask] ^= work[r]
        pivots.append(c)
        r += 1
    return RowReduction(
        _freeze(work[:, :cols].copy()),
        tuple(pivots),
        _freeze(work[:, cols:].copy()),
    )


def rank(a) -> int:
    return len(row_reduce(a).pivots)


def inverse(a):
    a = np.asarray(a, dtype=np.uint8)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f'only square matrices have inverses, got {a.shape}')
    reduced = row_reduce(a)
    if len(reduced.pivots) < a.shape[0]:
        logger.debug('inverse requested for a singular %dx%d matrix', *a.shape)
        raise SingularMatrix(f'matrix has rank {len(reduced.pivots)} < {a.shape[0]}')
    return reduced.transform


def solve_affine(a, b) -> AffineSolution:
    """Solve ``a @ x == b`` over GF(2).

    The full solution set is ``particular + span(kernel)``; free variables
    are zero in the particular solution.
    """
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8).reshape(-1)
    if a.ndim != 2 or a.shape[0] != b.shape[0]:
        raise DimensionMismatch(f'system {a.shape} does not match right-hand side of length {b.shape[0]}')
    reduced = row_reduce(a)
    rhs = (reduced.transform @ b) & 1
    count = len(reduced.pivots)
    if rhs[count:].any():
        raise NoSolution('right-hand side is outside the column space')

    cols = a.shape[1]
    particular = np.zeros(cols, dtype=np.uint8)
    for i, c in enumerate(reduced.pivots):
        particular[c] = rhs[i]

    pivot_set = set(reduced.pivots)
    kernel = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for i, c in enumerate(reduced.pivots):
            v[c] = reduced.rref[i, f]
        kernel.append(_freeze(v))
    return AffineSolution(_freeze(particular), tuple(kernel))


def min_solution(a, b):
    """Lexicographically smallest solution of ``a @ x == b`` (index 0 most significant).

    Eliminating on the reversed columns makes every pivot variable depend
    only on free variables with smaller index, so zeroing the free
    variables gives the minimum.
    """
    a = np.asarray(a, dtype=np.uint8)
    solution = solve_affine(a[:, ::-1], b)
    return _freeze(solution.particular[::-1].copy())


def in_span(rows, v) -> bool:
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.shape[0] == 0:
        return not np.asarray(v).any()
    try:
        solve_affine(rows.T, v)
    except NoSolution:
        return False
    return True


def parse_bits(text: str):
    text = text.strip()
    if not text or set(text) - {'0', '1'}:
        raise ValueError(f'not a bit string: {text!r}')
    return f2vector([int(ch) for ch in text])


def format_bits(v) -> str:
    return ''.join(str(int(x)) for x in np.asarray(v).reshape(-1))


def to_hex(v) -> str:
    bits = format_bits(v)
    width = max(1, -(-len(bits) // 4))
    return format(int(bits, 2) if bits else 0, f'0{width}x')


def parse_matrix(text: str):
    """Rows of 0/1 characters, one per line; blank lines and ``#`` comments are skipped."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        try:
            rows.append(parse_bits(line))
        except ValueError as exc:
            raise ValueError(f'line {lineno}: {exc}') from exc
    if rows and len({r.size for r in rows}) != 1:
        raise DimensionMismatch('matrix rows have different lengths')
    return f2matrix(rows)


def format_matrix(a) -> str:
    return ''.join(format_bits(row) + '\n' for row in np.asarray(a))
