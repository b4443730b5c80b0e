"""Exact linear algebra over prime fields GF(q).

All matrices in this package are tiny and dense, so the representation
favours exactness and hashability over asymptotics: a matrix is a frozen
row-major tuple of ints reduced mod q.  GF(2) rows are packed into Python
ints (bit j holds column j+1) for the hot paths; every other prime order
goes through a plain modular routine, which doubles as the reference
implementation that the bit-packed path is cross-checked against in the
test suite.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionError, InvalidQuery, NoInverse


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldOrder:
    """Order of a prime field.

    Composite orders are rejected outright; that includes prime powers,
    so GF(4), GF(8), GF(9), ... are not representable here.
    """

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise ValueError(f"field order must be an integer, got {self.q!r}")
        if not _is_prime(self.q):
            raise ValueError(
                f"field order must be prime, got {self.q} "
                "(prime powers such as 4, 8, 9 are not supported)"
            )

    def __int__(self) -> int:
        return self.q


def _as_order(q: FieldOrder | int) -> FieldOrder:
    return q if isinstance(q, FieldOrder) else FieldOrder(q)


def ff_inv(a: int, q: FieldOrder | int) -> int:
    """Multiplicative inverse of a in GF(q).  Raises NoInverse for a = 0."""
    qq = int(_as_order(q))
    if not 0 <= a < qq:
        raise ValueError(f"element {a} is not reduced mod {qq}")
    if a == 0:
        raise NoInverse(f"0 has no multiplicative inverse in GF({qq})")
    return pow(a, qq - 2, qq)


@dataclass(frozen=True)
class MatrixGF:
    """Immutable matrix over GF(q), entries stored row-major."""

    q: FieldOrder
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        qq = int(self.q)
        for e in self.entries:
            if not 0 <= e < qq:
                raise ValueError(f"entry {e} is not reduced mod {qq}")

    @staticmethod
    def from_rows(
        q: FieldOrder | int,
        rows: Sequence[Sequence[int]],
        cols: int | None = None,
    ) -> "MatrixGF":
        order = _as_order(q)
        data = [tuple(int(v) for v in row) for row in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != cols:
                raise DimensionError("ragged rows in matrix constructor")
        flat = tuple(v for row in data for v in row)
        return MatrixGF(order, len(data), cols, flat)

    @staticmethod
    def zeros(q: FieldOrder | int, rows: int, cols: int) -> "MatrixGF":
        return MatrixGF(_as_order(q), rows, cols, (0,) * (rows * cols))

    @staticmethod
    def identity(q: FieldOrder | int, n: int) -> "MatrixGF":
        flat = tuple(1 if r == c else 0 for r in range(n) for c in range(n))
        return MatrixGF(_as_order(q), n, n, flat)

    def row(self, r: int) -> tuple[int, ...]:
        """Row r (0-based) as a coefficient tuple."""
        return self.entries[r * self.cols : (r + 1) * self.cols]

    def to_rows(self) -> list[tuple[int, ...]]:
        return [self.row(r) for r in range(self.rows)]

    def bit_rows(self) -> list[int]:
        """Rows as bitmasks; only meaningful over GF(2)."""
        return [pack_bits(self.row(r)) for r in range(self.rows)]

    def stack(self, other: "MatrixGF") -> "MatrixGF":
        if int(self.q) != int(other.q):
            raise DimensionError("cannot stack matrices over different fields")
        if self.cols != other.cols:
            raise DimensionError("cannot stack matrices of different widths")
        return MatrixGF(
            self.q, self.rows + other.rows, self.cols, self.entries + other.entries
        )


# ---------------------------------------------------------------------------
# GF(2) bit-packed primitives.


def pack_bits(vec: Sequence[int]) -> int:
    """Pack a 0/1 vector into an int, column j+1 at bit j."""
    word = 0
    for j, v in enumerate(vec):
        if v:
            word |= 1 << j
    return word


def unpack_bits(word: int, width: int) -> tuple[int, ...]:
    return tuple((word >> j) & 1 for j in range(width))


def bit_rref(rows: Iterable[int]) -> tuple[list[int], list[int]]:
    """Reduced row-echelon basis of bitmask rows.

    Returns (basis, pivots): nonzero reduced rows sorted by pivot column,
    and the matching 0-based pivot columns.  Each pivot column has a single
    one, so membership tests reduce to a short XOR chain.
    """
    basis: list[int] = []
    pivots: list[int] = []
    for vec in rows:
        for b, p in zip(basis, pivots):
            if (vec >> p) & 1:
                vec ^= b
        if not vec:
            continue
        p = (vec & -vec).bit_length() - 1
        for k in range(len(basis)):
            if (basis[k] >> p) & 1:
                basis[k] ^= vec
        at = bisect_left(pivots, p)
        basis.insert(at, vec)
        pivots.insert(at, p)
    return basis, pivots


def bit_residual(vec: int, basis: Sequence[int], pivots: Sequence[int]) -> int:
    """Remainder of vec after elimination against a bit_rref basis."""
    for b, p in zip(basis, pivots):
        if (vec >> p) & 1:
            vec ^= b
    return vec


# ---------------------------------------------------------------------------
# General prime-q primitives (reference path, also used for q > 2).


def mod_rref(rows: Iterable[Sequence[int]], q: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row-echelon basis of coefficient rows mod prime q.

    Same contract as bit_rref, with rows as lists of ints.
    """
    basis: list[list[int]] = []
    pivots: list[int] = []
    for row in rows:
        vec = [v % q for v in row]
        for b, p in zip(basis, pivots):
            c = vec[p]
            if c:
                vec = [(x - c * y) % q for x, y in zip(vec, b)]
        p = next((j for j, v in enumerate(vec) if v), None)
        if p is None:
            continue
        inv = pow(vec[p], q - 2, q)
        vec = [(x * inv) % q for x in vec]
        for k in range(len(basis)):
            c = basis[k][p]
            if c:
                basis[k] = [(x - c * y) % q for x, y in zip(basis[k], vec)]
        at = bisect_left(pivots, p)
        basis.insert(at, vec)
        pivots.insert(at, p)
    return basis, pivots


def mod_residual(
    vec: Sequence[int], basis: Sequence[Sequence[int]], pivots: Sequence[int], q: int
) -> list[int]:
    out = [v % q for v in vec]
    for b, p in zip(basis, pivots):
        c = out[p]
        if c:
            out = [(x - c * y) % q for x, y in zip(out, b)]
    return out


# ---------------------------------------------------------------------------
# Public matrix operations.


class RrefResult(NamedTuple):
    matrix: "MatrixGF"
    rank: int
    pivot_cols: tuple[int, ...]  # 1-based column indices


def rref(m: MatrixGF) -> RrefResult:
    """Reduced row-echelon form, rank export, and 1-based pivot columns.

    The result has the same shape as the input: reduced nonzero rows first,
    then all-zero rows.  The row space is preserved exactly.
    """
    if int(m.q) == 2:
        basis, pivots = bit_rref(m.bit_rows())
        reduced = [unpack_bits(b, m.cols) for b in basis]
    else:
        basis_m, pivots = mod_rref(m.to_rows(), int(m.q))
        reduced = [tuple(b) for b in basis_m]
    rank = len(reduced)
    flat: list[int] = []
    for row in reduced:
        flat.extend(row)
    flat.extend([0] * ((m.rows - rank) * m.cols))
    matrix = MatrixGF(m.q, m.rows, m.cols, tuple(flat))
    return RrefResult(matrix, rank, tuple(p + 1 for p in pivots))


def in_extended_rowspace(m: MatrixGF, s: Iterable[int], i: int) -> bool:
    """Whether unit vector e_i lies in rowspace(m) + span{e_j : j in s}.

    Indices are 1-based columns.  Equivalently: some row-space vector has a
    nonzero i-th coordinate and support inside s ∪ {i}.  Requires i not in s.
    """
    s_set = frozenset(int(j) for j in s)
    if not 1 <= i <= m.cols:
        raise InvalidQuery(f"index {i} outside 1..{m.cols}")
    for j in s_set:
        if not 1 <= j <= m.cols:
            raise InvalidQuery(f"index {j} outside 1..{m.cols}")
    if i in s_set:
        raise InvalidQuery(f"index {i} is already inside the spanning set")
    extra = sorted(s_set)
    if int(m.q) == 2:
        rows = m.bit_rows() + [1 << (j - 1) for j in extra]
        basis, pivots = bit_rref(rows)
        return bit_residual(1 << (i - 1), basis, pivots) == 0
    q = int(m.q)
    unit_rows = []
    for j in extra:
        unit = [0] * m.cols
        unit[j - 1] = 1
        unit_rows.append(unit)
    basis, pivots = mod_rref([list(r) for r in m.to_rows()] + unit_rows, q)
    target = [0] * m.cols
    target[i - 1] = 1
    return not any(mod_residual(target, basis, pivots, q))


def combination_for(m: MatrixGF, target: Sequence[int]) -> tuple[int, ...] | None:
    """Coefficients x with x·m = target, or None when target is outside the row space.

    Works over any prime q; used for extracting explicit decoding witnesses,
    so it tracks the elimination instead of only reducing.
    """
    q = int(m.q)
    if len(target) != m.cols:
        raise DimensionError("target width does not match matrix")
    basis: list[tuple[list[int], list[int]]] = []  # (reduced row, combo of original rows)
    pivots: list[int] = []
    for ridx in range(m.rows):
        vec = [v % q for v in m.row(ridx)]
        combo = [0] * m.rows
        combo[ridx] = 1
        for (b, bc), p in zip(basis, pivots):
            c = vec[p]
            if c:
                vec = [(x - c * y) % q for x, y in zip(vec, b)]
                combo = [(x - c * y) % q for x, y in zip(combo, bc)]
        p = next((j for j, v in enumerate(vec) if v), None)
        if p is None:
            continue
        inv = pow(vec[p], q - 2, q)
        vec = [(x * inv) % q for x in vec]
        combo = [(x * inv) % q for x in combo]
        for k in range(len(basis)):
            c = basis[k][0][p]
            if c:
                b, bc = basis[k]
                basis[k] = (
                    [(x - c * y) % q for x, y in zip(b, vec)],
                    [(x - c * y) % q for x, y in zip(bc, combo)],
                )
        at = bisect_left(pivots, p)
        basis.insert(at, (vec, combo))
        pivots.insert(at, p)
    rem = [v % q for v in target]
    out = [0] * m.rows
    for (b, bc), p in zip(basis, pivots):
        c = rem[p]
        if c:
            rem = [(x - c * y) % q for x, y in zip(rem, b)]
            out = [(x + c * y) % q for x, y in zip(out, bc)]
    if any(rem):
        return None
    return tuple(out)
