"""Symplectic geometry on F2^{2m}.

Row-vector convention throughout: a symplectic matrix F acts as ``x -> x F``.
"""
import enum
import logging
from dataclasses import dataclass
from typing import Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import f2core
from .f2core import F2Matrix, F2Vector

logger = logging.getLogger(__name__)

DEFAULT_CEILING = 1 << 20


class IncompatibleInnerProducts(ValueError):
    pass


class DependentInputs(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class InconsistentInput(ValueError):
    pass


class TooLarge(ValueError):
    pass


class CeilingExceeded(ValueError):
    def __init__(self, count, ceiling):
        self.count = count
        self.ceiling = ceiling
        super().__init__(f'{count} solutions exceed the enumeration ceiling of {ceiling}')


def omega(m: int) -> F2Matrix:
    out = np.zeros((2 * m, 2 * m), dtype=np.uint8)
    out[:m, m:] = np.eye(m, dtype=np.uint8)
    out[m:, :m] = np.eye(m, dtype=np.uint8)
    out.setflags(write=False)
    return out


def _half(n: int) -> int:
    if n % 2:
        raise f2core.DimensionMismatch(f'symplectic vectors have even length, got {n}')
    return n // 2


def symp_inner(x, y) -> int:
    """<x, y> = x Omega y^T, i.e. a'b^T + b'a^T."""
    x = np.asarray(x, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    if x.shape != y.shape:
        raise f2core.DimensionMismatch(f'vectors of length {x.shape} and {y.shape}')
    m = _half(x.shape[0])
    return int((x[:m] @ y[m:] + x[m:] @ y[:m]) & 1)


def _functional(v) -> np.ndarray:
    """Row r with r . w = <v, w> for every w."""
    v = np.asarray(v, dtype=np.uint8)
    m = _half(v.shape[0])
    return np.concatenate([v[m:], v[:m]])


def gram(rows) -> F2Matrix:
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.shape[0] == 0:
        return f2core.zeros(0, 0)
    return f2core.multiply(f2core.multiply(rows, omega(_half(rows.shape[1]))), rows.T)


def is_symplectic(f) -> bool:
    f = np.asarray(f, dtype=np.uint8)
    if f.ndim != 2 or f.shape[0] != f.shape[1] or f.shape[0] % 2:
        return False
    return bool(np.array_equal(gram(f), omega(f.shape[0] // 2)))


def transvection(h) -> F2Matrix:
    """F_h = I + Omega h^T h, the matrix of x -> x + <x,h> h."""
    h = np.asarray(h, dtype=np.uint8)
    n = h.shape[0]
    return f2core.add(f2core.identity(n), np.outer(_functional(h), h).astype(np.uint8))


def apply_transvections(x, hs: Sequence[F2Vector]) -> F2Vector:
    out = np.array(x, dtype=np.uint8)
    for h in hs:
        if symp_inner(out, h):
            out ^= h
    return f2core.f2vector(out)


def compose_transvections(hs: Sequence[F2Vector], n: int) -> F2Matrix:
    f = np.eye(n, dtype=np.uint8)
    for h in hs:
        h = np.asarray(h, dtype=np.uint8)
        coeff = (f @ _functional(h)) & 1
        f ^= np.outer(coeff, h).astype(np.uint8)
    f.setflags(write=False)
    return f


def _pick_w(conditions: Sequence[Tuple[F2Vector, int]]) -> F2Vector:
    """Smallest w with <c, w> = value for every (c, value) condition."""
    rows = f2core.stack([_functional(c) for c, _ in conditions], len(conditions[0][0]))
    rhs = f2core.f2vector([value for _, value in conditions])
    return f2core.min_solution(rows, rhs)


def map_vector(x, y) -> List[F2Vector]:
    """At most two transvection vectors whose product maps x to y."""
    x = f2core.f2vector(x)
    y = f2core.f2vector(y)
    if not x.any() or not y.any():
        raise ZeroVector('both vectors must be non-zero')
    if np.array_equal(x, y):
        return []
    if symp_inner(x, y):
        return [f2core.add(x, y)]
    w = _pick_w([(x, 1), (y, 1)])
    return [f2core.add(w, y), f2core.add(x, w)]


def _check_constraints(xs: Sequence[F2Vector], ys: Sequence[F2Vector]) -> int:
    if len(xs) != len(ys):
        raise f2core.DimensionMismatch(f'{len(xs)} sources but {len(ys)} images')
    if not xs:
        raise f2core.DimensionMismatch('at least one constraint is required')
    width = len(xs[0])
    m = _half(width)
    if any(len(v) != width for v in list(xs) + list(ys)):
        raise f2core.DimensionMismatch('all constraint vectors must have the same length')
    if len(xs) > 2 * m:
        raise DependentInputs(f'{len(xs)} constraints on a {2 * m}-dimensional space')
    if f2core.rank(f2core.stack(xs, width)) < len(xs):
        raise DependentInputs('source vectors are linearly dependent')
    if f2core.rank(f2core.stack(ys, width)) < len(ys):
        raise DependentInputs('image vectors are linearly dependent')
    gx = gram(f2core.stack(xs, width))
    gy = gram(f2core.stack(ys, width))
    if not np.array_equal(gx, gy):
        i, j = (int(v) for v in np.argwhere(gx != gy)[0])
        raise IncompatibleInnerProducts(
            f'<x{i + 1},x{j + 1}> = {gx[i, j]} but <y{i + 1},y{j + 1}> = {gy[i, j]}'
        )
    return m


def particular_transvections(xs: Sequence[F2Vector], ys: Sequence[F2Vector]) -> List[F2Vector]:
    """Transvection vectors h_1.. whose product F satisfies x_i F = y_i.

    At most two transvections are spent per constraint. When <x~_i, y_i> = 0
    the helper vector w_i must also keep the earlier images fixed:
    <y_j, w_i> = <y_j, y_i> for every j < i.
    """
    xs = [f2core.f2vector(x) for x in xs]
    ys = [f2core.f2vector(y) for y in ys]
    _check_constraints(xs, ys)

    hs: List[F2Vector] = []
    for i, (x, y) in enumerate(zip(xs, ys)):
        current = apply_transvections(x, hs)
        if np.array_equal(current, y):
            continue
        if symp_inner(current, y):
            hs.append(f2core.add(current, y))
            continue
        conditions = [(current, 1), (y, 1)] + [(yj, symp_inner(yj, y)) for yj in ys[:i]]
        try:
            w = _pick_w(conditions)
        except f2core.NoSolution as exc:
            raise IncompatibleInnerProducts(f'no helper vector for constraint {i + 1}') from exc
        hs.extend([f2core.add(w, y), f2core.add(current, w)])
    logger.debug('particular solution uses %d transvections for %d constraints', len(hs), len(xs))
    return hs


def solve_particular(xs: Sequence[F2Vector], ys: Sequence[F2Vector]) -> F2Matrix:
    hs = particular_transvections(xs, ys)
    return compose_transvections(hs, len(xs[0]))


class SymplecticBasis(NamedTuple):
    u: F2Matrix
    v: F2Matrix

    def matrix(self) -> F2Matrix:
        return f2core.stack(list(self.u) + list(self.v), self.u.shape[1])


def complete_basis(pairs: Sequence[Tuple[F2Vector, F2Vector]], singles: Sequence[F2Vector] = (),
                   m: Optional[int] = None) -> SymplecticBasis:
    """Extend partial symplectic pairs and unpaired isotropic vectors to a full basis.

    Given pairs keep their positions and come first; each single s becomes
    the u-half of a new pair; the remaining pairs are grown from standard
    basis vectors by symplectic Gram-Schmidt.
    """
    pairs = [(f2core.f2vector(u), f2core.f2vector(v)) for u, v in pairs]
    singles = [f2core.f2vector(s) for s in singles]
    supplied = [u for u, _ in pairs] + [v for _, v in pairs] + singles
    if m is None:
        if not supplied:
            raise f2core.DimensionMismatch('m is required when no vectors are supplied')
        m = _half(len(supplied[0]))
    width = 2 * m
    if any(len(v) != width for v in supplied):
        raise InconsistentInput(f'all vectors must have length {width}')
    if len(pairs) + len(singles) > m:
        raise InconsistentInput(f'{len(pairs)} pairs and {len(singles)} singles exceed m = {m}')
    if supplied and f2core.rank(f2core.stack(supplied, width)) < len(supplied):
        raise InconsistentInput('supplied vectors are linearly dependent')
    for a, (ua, va) in enumerate(pairs):
        for b, (ub, vb) in enumerate(pairs):
            if symp_inner(ua, vb) != int(a == b):
                raise InconsistentInput(f'<u{a + 1},v{b + 1}> != {int(a == b)}')
            if symp_inner(ua, ub) or symp_inner(va, vb):
                raise InconsistentInput(f'pairs {a + 1} and {b + 1} are not orthogonal')
    for s_idx, s in enumerate(singles):
        for other in supplied:
            if symp_inner(s, other):
                raise InconsistentInput(f'single vector {s_idx + 1} is not isotropic against the input')

    us = [u for u, _ in pairs]
    vs = [v for _, v in pairs]

    for idx, s in enumerate(singles):
        others = singles[:idx] + singles[idx + 1:]
        conditions = [(c, 0) for c in us + vs + others] + [(s, 1)]
        us.append(s)
        vs.append(_pick_w(conditions))

    for e_idx in range(width):
        if len(us) == m:
            break
        e = np.zeros(width, dtype=np.uint8)
        e[e_idx] = 1
        if us and f2core.in_span(f2core.stack(us + vs, width), e):
            continue
        for ua, va in zip(us, vs):
            if symp_inner(e, va):
                e ^= ua
            if symp_inner(e, ua):
                e ^= va
        e = f2core.f2vector(e)
        conditions = [(c, 0) for c in us + vs] + [(e, 1)]
        us.append(e)
        vs.append(_pick_w(conditions))

    return SymplecticBasis(f2core.stack(us, width), f2core.stack(vs, width))


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Constraints u_i F = u'_i (i in I), v_j F = v'_j (j in J) on a symplectic basis.

    Index sets are 0-based.
    """
    basis_u: F2Matrix
    basis_v: F2Matrix
    images_u: Mapping[int, F2Vector]
    images_v: Mapping[int, F2Vector]

    @property
    def m(self) -> int:
        return self.basis_u.shape[0]

    @property
    def I(self) -> Tuple[int, ...]:
        return tuple(sorted(self.images_u))

    @property
    def J(self) -> Tuple[int, ...]:
        return tuple(sorted(self.images_v))

    @property
    def alpha(self) -> int:
        return (self.m - len(self.images_u)) + (self.m - len(self.images_v))

    @property
    def free_pairs(self) -> int:
        """Pairs with neither basis vector constrained."""
        return sum(1 for d in range(self.m) if d not in self.images_u and d not in self.images_v)

    def basis(self) -> F2Matrix:
        return f2core.stack(list(self.basis_u) + list(self.basis_v), 2 * self.m)

    def sources(self) -> List[F2Vector]:
        return [self.basis_u[i] for i in self.I] + [self.basis_v[j] for j in self.J]

    def targets(self) -> List[F2Vector]:
        return [self.images_u[i] for i in self.I] + [self.images_v[j] for j in self.J]

    def validate(self):
        m = self.m
        if self.basis_u.shape != (m, 2 * m) or self.basis_v.shape != (m, 2 * m):
            raise f2core.DimensionMismatch('basis must be two m x 2m matrices')
        if any(i < 0 or i >= m for i in list(self.images_u) + list(self.images_v)):
            raise f2core.DimensionMismatch(f'constraint indices must lie in 0..{m - 1}')
        if not is_symplectic(self.basis()):
            raise InconsistentInput('basis vectors do not form a symplectic basis')
        for i1 in self.I:
            for i2 in self.I:
                if symp_inner(self.images_u[i1], self.images_u[i2]):
                    raise IncompatibleInnerProducts(f"<u'{i1 + 1},u'{i2 + 1}> != 0")
            for j in self.J:
                if symp_inner(self.images_u[i1], self.images_v[j]) != int(i1 == j):
                    raise IncompatibleInnerProducts(f"<u'{i1 + 1},v'{j + 1}> != {int(i1 == j)}")
        for j1 in self.J:
            for j2 in self.J:
                if symp_inner(self.images_v[j1], self.images_v[j2]):
                    raise IncompatibleInnerProducts(f"<v'{j1 + 1},v'{j2 + 1}> != 0")
        targets = self.targets()
        if targets and f2core.rank(f2core.stack(targets, 2 * m)) < len(targets):
            raise DependentInputs('constraint images are linearly dependent')


class SolveMode(enum.Enum):
    ENUMERATE = 'all'
    FIRST = 'first'
    COUNT = 'count'


class Solutions(NamedTuple):
    count: int
    matrices: Iterator[F2Matrix]


def group_order(m: int) -> int:
    """|Sp(2m, F2)| = 2^{m^2} prod_{j=1..m} (4^j - 1)."""
    order = 1 << (m * m)
    for j in range(1, m + 1):
        order *= (1 << (2 * j)) - 1
    return order


def solution_count(alpha: int, free_pairs: int = 0) -> int:
    """Number of solutions of a system with ``alpha`` free basis vectors.

    This is 2^{alpha(alpha+1)/2} when every pair (u_d, v_d) has at least
    one constrained vector. Each of the ``free_pairs`` pairs with both
    vectors free contributes a symplectic group factor instead.
    """
    fixed = alpha - 2 * free_pairs
    return (1 << (fixed * (fixed + 1) // 2 + 2 * fixed * free_pairs)) * group_order(free_pairs)


def count_solutions(system: ConstraintSystem) -> int:
    system.validate()
    return solution_count(system.alpha, system.free_pairs)


def solve_all(system: ConstraintSystem, mode: SolveMode = SolveMode.ENUMERATE,
              ceiling: Optional[int] = DEFAULT_CEILING) -> Solutions:
    """All symplectic F meeting the constraints, as a lazy stream.

    Enumeration refuses systems whose count exceeds ``ceiling``; FIRST
    yields the particular solution.
    """
    system.validate()
    count = solution_count(system.alpha, system.free_pairs)
    if mode is SolveMode.COUNT:
        return Solutions(count, iter(()))
    if mode is SolveMode.ENUMERATE and ceiling is not None and count > ceiling:
        logger.warning('refusing to enumerate %d solutions (ceiling %d)', count, ceiling)
        raise CeilingExceeded(count, ceiling)
    if system.sources():
        f0 = solve_particular(system.sources(), system.targets())
    else:
        f0 = f2core.identity(2 * system.m)
    if mode is SolveMode.FIRST:
        return Solutions(count, iter((f0,)))
    return Solutions(count, _enumerate(system, f0))


def _enumerate(system: ConstraintSystem, f0: F2Matrix) -> Iterator[F2Matrix]:
    m = system.m
    a = f2core.multiply(system.basis(), f0)
    a_inv = f2core.inverse(a)
    free = [(0, d) for d in range(m) if d not in system.images_u] + \
           [(1, d) for d in range(m) if d not in system.images_v]
    if not free:
        yield f0
        return

    # W-perp is spanned by the pairs touched by a free vector
    touched = sorted({d for _, d in free})
    slots = [(0, d) for d in touched] + [(1, d) for d in touched]
    w_basis = f2core.stack([a[kind * m + d] for kind, d in slots], 2 * m)
    n = len(slots)
    coords = ((np.arange(1 << n)[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    subspace = f2core.multiply(coords, w_basis)

    fixed = [s for s in slots if s not in free]
    big_omega = omega(m)
    if fixed:
        fixed_rows = f2core.stack([w_basis[slots.index(s)] for s in fixed], 2 * m)
        signatures = (subspace @ ((big_omega @ fixed_rows.T) & 1)) & 1
    else:
        signatures = np.zeros((subspace.shape[0], 0), dtype=np.uint8)

    choices = []
    for kind, d in free:
        wanted = np.array([int(s == (1 - kind, d)) for s in fixed], dtype=np.uint8)
        choices.append(subspace[(signatures == wanted).all(axis=1)])

    def extend(level, chosen):
        if level == len(free):
            b = np.array(a, dtype=np.uint8)
            for (kind, d), row in zip(free, chosen):
                b[kind * m + d] = row
            yield f2core.multiply(f0, f2core.multiply(a_inv, b))
            return
        kind, d = free[level]
        candidates = choices[level]
        if chosen:
            previous = np.vstack(chosen)
            wanted = np.array([int(free[lv] == (1 - kind, d)) for lv in range(level)], dtype=np.uint8)
            inner = (candidates @ ((big_omega @ previous.T) & 1)) & 1
            candidates = candidates[(inner == wanted).all(axis=1)]
        for row in candidates:
            yield from extend(level + 1, chosen + [row])

    yield from extend(0, [])


def enumerate_group(m: int) -> np.ndarray:
    """Every element of Sp(2m, F2) by brute-force filtering; only for m <= 2.

    Returns a read-only array of shape (|Sp|, 2m, 2m).
    """
    if m > 2:
        raise TooLarge(f'brute-force enumeration is limited to m <= 2, got {m}')
    n = 2 * m
    codes = np.arange(1 << (n * n), dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(n * n)) & 1).astype(np.uint8).reshape(-1, n, n)
    big_omega = omega(m)
    products = ((bits @ big_omega) @ bits.transpose(0, 2, 1)) & 1
    group = bits[(products == big_omega).all(axis=(1, 2))]
    group.setflags(write=False)
    return group


def system_from_pairs(xs: Sequence[F2Vector], ys: Sequence[F2Vector]) -> ConstraintSystem:
    """Turn raw constraints x_i F = y_i into an equivalent system on a symplectic basis.

    Symplectic Gram-Schmidt on span{x_i} splits it into hyperbolic pairs
    and isotropic singles; the images follow the same row operations.
    """
    xs = [f2core.f2vector(x) for x in xs]
    ys = [f2core.f2vector(y) for y in ys]
    m = _check_constraints(xs, ys)

    remaining = [(np.array(x), np.array(y)) for x, y in zip(xs, ys)]
    pairs, singles = [], []
    while remaining:
        x, y = remaining.pop(0)
        partner = next((i for i, (z, _) in enumerate(remaining) if symp_inner(x, z)), None)
        if partner is None:
            singles.append((x, y))
            continue
        x2, y2 = remaining.pop(partner)
        pairs.append(((x, y), (x2, y2)))
        for z, w in remaining:
            c_x, c_x2 = symp_inner(z, x2), symp_inner(z, x)
            if c_x:
                z ^= x
                w ^= y
            if c_x2:
                z ^= x2
                w ^= y2

    basis = complete_basis([(p[0][0], p[1][0]) for p in pairs], [s[0] for s in singles], m=m)
    images_u = {i: f2core.f2vector(p[0][1]) for i, p in enumerate(pairs)}
    images_u.update({len(pairs) + i: f2core.f2vector(s[1]) for i, s in enumerate(singles)})
    images_v = {i: f2core.f2vector(p[1][1]) for i, p in enumerate(pairs)}
    return ConstraintSystem(basis.u, basis.v, images_u, images_v)


def parse_constraints(text: str) -> Tuple[List[F2Vector], List[F2Vector]]:
    """Read ``<bits> -> <bits>`` lines into source and image vectors."""
    xs, ys = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        left, arrow, right = line.partition('->')
        if not arrow:
            raise ValueError(f'line {lineno}: expected "<bits> -> <bits>", got {line!r}')
        try:
            xs.append(f2core.parse_bits(left))
            ys.append(f2core.parse_bits(right))
        except ValueError as exc:
            raise ValueError(f'line {lineno}: {exc}') from exc
    return xs, ys
