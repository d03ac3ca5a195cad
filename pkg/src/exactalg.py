"""
Exact linear algebra over GF(2), prime fields GF(p) and the rationals.

Matrices are indexed rather than positional: rows and columns carry hashable
labels. The label order given at construction only fixes the elimination
order, so every result is deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from sympy import isprime

from errors import DomainError

logger = logging.getLogger(__name__)

Scalar = int | Fraction
Label = Hashable


class FieldKind(str, Enum):
    GF2 = "gf2"
    GFP = "gfp"
    RATIONAL = "rational"


@dataclass(frozen=True)
class FieldSpec:
    """A field: GF(2), GF(p) for a prime p < 2^31, or the rationals."""
    kind: FieldKind
    p: int = 0

    def __post_init__(self):
        if self.kind is FieldKind.GF2:
            object.__setattr__(self, "p", 2)
        elif self.kind is FieldKind.GFP:
            if not (2 < self.p < 2 ** 31) or not isprime(self.p):
                raise DomainError(f"GF(p) needs an odd prime p < 2^31, got {self.p}")
        else:
            object.__setattr__(self, "p", 0)

    @classmethod
    def gf2(cls) -> "FieldSpec":
        return cls(FieldKind.GF2)

    @classmethod
    def gfp(cls, p: int) -> "FieldSpec":
        if p == 2:
            return cls.gf2()
        return cls(FieldKind.GFP, p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONAL)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse `gf2`, `gf3`, `gf<p>`, `rational` (also `q`, `r`)."""
        token = text.strip().lower()
        if token in ("rational", "q", "r", "real", "reals"):
            return cls.rational()
        if token.startswith("gf") and token[2:].isdigit():
            p = int(token[2:])
            if p == 2 or isprime(p):
                return cls.gfp(p)
        raise DomainError(f"unknown field spec {text!r}")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        if self.kind is FieldKind.RATIONAL:
            return "rational"
        return f"gf{self.p}"

    def reduce(self, x: Scalar) -> Scalar:
        """Canonical representative of x in this field."""
        if self.kind is FieldKind.RATIONAL:
            f = Fraction(x)
            return f.numerator if f.denominator == 1 else f
        if isinstance(x, int):
            return x % self.p
        f = Fraction(x)
        if f.denominator % self.p == 0:
            raise DomainError(f"{x} has no image in {self.name}")
        return f.numerator * pow(f.denominator, -1, self.p) % self.p

    def inverse(self, x: Scalar) -> Scalar:
        if x == 0:
            raise DomainError("division by zero")
        if self.kind is FieldKind.RATIONAL:
            return self.reduce(1 / Fraction(x))
        return pow(int(x), -1, self.p)

    def __str__(self) -> str:
        return self.name


GF2 = FieldSpec.gf2()
RATIONAL = FieldSpec.rational()


class ExactMatrix:
    """Immutable indexed matrix over a FieldSpec."""

    __slots__ = ("rows", "cols", "field", "_data", "_row_index", "_col_index")

    def __init__(self, rows: Sequence[Label], cols: Sequence[Label],
                 data: Sequence[Sequence[Scalar]], field: FieldSpec):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.field = field
        self._row_index = {r: i for i, r in enumerate(self.rows)}
        self._col_index = {c: j for j, c in enumerate(self.cols)}
        if len(self._row_index) != len(self.rows) or len(self._col_index) != len(self.cols):
            raise DomainError("row and column labels must be unique")
        if len(data) != len(self.rows) or any(len(row) != len(self.cols) for row in data):
            raise DomainError(
                f"data shape does not match {len(self.rows)}x{len(self.cols)} labels")
        self._data = tuple(tuple(field.reduce(x) for x in row) for row in data)

    # ------------------------------------------------------------------
    # Construction helpers
    # ------------------------------------------------------------------
    @classmethod
    def from_entries(cls, rows: Sequence[Label], cols: Sequence[Label],
                     entries: Mapping[tuple[Label, Label], Scalar], field: FieldSpec) -> "ExactMatrix":
        rows, cols = tuple(rows), tuple(cols)
        row_set, col_set = set(rows), set(cols)
        for (r, c) in entries:
            if r not in row_set or c not in col_set:
                raise DomainError(f"entry index ({r!r}, {c!r}) outside the matrix")
        data = [[entries.get((r, c), 0) for c in cols] for r in rows]
        return cls(rows, cols, data, field)

    @classmethod
    def identity(cls, labels: Sequence[Label], field: FieldSpec,
                 col_labels: Optional[Sequence[Label]] = None) -> "ExactMatrix":
        labels = tuple(labels)
        cols = tuple(col_labels) if col_labels is not None else labels
        data = [[1 if i == j else 0 for j in range(len(labels))] for i in range(len(labels))]
        return cls(labels, cols, data, field)

    @classmethod
    def zeros(cls, rows: Sequence[Label], cols: Sequence[Label], field: FieldSpec) -> "ExactMatrix":
        return cls(rows, cols, [[0] * len(cols) for _ in rows], field)

    # ------------------------------------------------------------------
    # Access
    # ------------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def _col_positions(self, cols: Iterable[Label]) -> list[int]:
        try:
            return [self._col_index[c] for c in cols]
        except KeyError as e:
            raise DomainError(f"unknown column index {e.args[0]!r}") from None

    def _row_positions(self, rows: Iterable[Label]) -> list[int]:
        try:
            return [self._row_index[r] for r in rows]
        except KeyError as e:
            raise DomainError(f"unknown row index {e.args[0]!r}") from None

    def entry(self, row: Label, col: Label) -> Scalar:
        i = self._row_positions([row])[0]
        j = self._col_positions([col])[0]
        return self._data[i][j]

    def row(self, row: Label) -> tuple[Scalar, ...]:
        return self._data[self._row_positions([row])[0]]

    def column(self, col: Label) -> tuple[Scalar, ...]:
        j = self._col_positions([col])[0]
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> list[list[Scalar]]:
        return [list(r) for r in self._data]

    def entries(self) -> dict[tuple[Label, Label], Scalar]:
        return {(r, c): self._data[i][j]
                for i, r in enumerate(self.rows) for j, c in enumerate(self.cols)}

    # ------------------------------------------------------------------
    # Derived matrices
    # ------------------------------------------------------------------
    def submatrix(self, rows: Optional[Sequence[Label]] = None,
                  cols: Optional[Sequence[Label]] = None) -> "ExactMatrix":
        rows = self.rows if rows is None else tuple(rows)
        cols = self.cols if cols is None else tuple(cols)
        ri, ci = self._row_positions(rows), self._col_positions(cols)
        return ExactMatrix(rows, cols, [[self._data[i][j] for j in ci] for i in ri], self.field)

    def over(self, field: FieldSpec) -> "ExactMatrix":
        """Image of this matrix in another field (from the rationals or the same field)."""
        if field == self.field:
            return self
        if self.field.kind is not FieldKind.RATIONAL:
            raise DomainError(f"cannot map a {self.field} matrix into {field}")
        return ExactMatrix(self.rows, self.cols, self._data, field)

    def transpose(self) -> "ExactMatrix":
        data = [[row[j] for row in self._data] for j in range(len(self.cols))]
        return ExactMatrix(self.cols, self.rows, data, self.field)

    def relabel(self, rows: Optional[Mapping[Label, Label]] = None,
                cols: Optional[Mapping[Label, Label]] = None) -> "ExactMatrix":
        new_rows = [rows.get(r, r) for r in self.rows] if rows else self.rows
        new_cols = [cols.get(c, c) for c in self.cols] if cols else self.cols
        return ExactMatrix(new_rows, new_cols, self._data, self.field)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if set(self.rows) != set(other.rows) or self.field != other.field:
            raise DomainError("hstack needs equal row sets over one field")
        aligned = other.submatrix(rows=self.rows)
        data = [list(a) + list(b) for a, b in zip(self._data, aligned._data)]
        return ExactMatrix(self.rows, self.cols + other.cols, data, self.field)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if set(self.cols) != set(other.cols) or self.field != other.field:
            raise DomainError("vstack needs equal column sets over one field")
        aligned = other.submatrix(cols=self.cols)
        return ExactMatrix(self.rows + other.rows, self.cols,
                           list(self._data) + list(aligned._data), self.field)

    def scale_row(self, row: Label, s: Scalar) -> "ExactMatrix":
        i = self._row_positions([row])[0]
        data = self.to_lists()
        data[i] = [x * s for x in data[i]]
        return ExactMatrix(self.rows, self.cols, data, self.field)

    def scale_column(self, col: Label, s: Scalar) -> "ExactMatrix":
        j = self._col_positions([col])[0]
        data = self.to_lists()
        for r in data:
            r[j] = r[j] * s
        return ExactMatrix(self.rows, self.cols, data, self.field)

    def add_row_multiple(self, target: Label, source: Label, s: Scalar) -> "ExactMatrix":
        """Row `target` += s * row `source`."""
        t, u = self._row_positions([target, source])
        data = self.to_lists()
        data[t] = [a + s * b for a, b in zip(data[t], data[u])]
        return ExactMatrix(self.rows, self.cols, data, self.field)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.field != other.field:
            raise DomainError("matrix product across different fields")
        if set(self.cols) != set(other.rows):
            raise DomainError("inner index sets of a matrix product differ")
        right = other.submatrix(rows=self.cols)._data
        ncols = len(other.cols)
        data = []
        for row in self._data:
            data.append([sum(row[k] * right[k][j] for k in range(len(row)) if row[k])
                         for j in range(ncols)])
        return ExactMatrix(self.rows, other.cols, data, self.field)

    def is_identity(self) -> bool:
        if set(self.rows) != set(self.cols):
            return False
        return all(self.entry(r, c) == (1 if r == c else 0) for r in self.rows for c in self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.field != other.field or set(self.rows) != set(other.rows) \
                or set(self.cols) != set(other.cols):
            return False
        return self.entries() == other.entries()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        body = "; ".join(f"{r}: {list(row)}" for r, row in zip(self.rows, self._data))
        return f"ExactMatrix[{self.field}]({list(self.cols)} | {body})"


# ----------------------------------------------------------------------
# Elimination kernels
# ----------------------------------------------------------------------

def _rank_gf2_bits(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            h = v.bit_length() - 1
            if h in pivots:
                v ^= pivots[h]
            else:
                pivots[h] = v
                break
    return len(pivots)


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        pr = [(x * inv) % p for x in m[r]]
        m[r] = pr
        for i in range(r + 1, nrows):
            f = m[i][c]
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], pr)]
        r += 1
    return r


def _det_mod_p(rows: list[list[int]], p: int) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], -1, p)
        for i in range(c + 1, n):
            f = m[i][c] * inv % p
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[c])]
    return det % p


def _bareiss(rows: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination on an integer matrix; returns (rank, det).

    det is only meaningful for square input (0 when rank-deficient).
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    sign, prev, r = 1, 1, 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        pivot_row = m[r]
        pivot = pivot_row[c]
        for i in range(r + 1, nrows):
            mi = m[i]
            f = mi[c]
            for j in range(c + 1, ncols):
                mi[j] = (mi[j] * pivot - f * pivot_row[j]) // prev
            mi[c] = 0
        prev = pivot
        r += 1
    det = 0
    if nrows == ncols and r == nrows:
        det = sign * m[-1][-1] if nrows else 1
    return r, det


def _integer_rows(rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[int]], int]:
    """Scale rational rows to integers; returns the rows and the product of scales."""
    out, scale = [], 1
    for row in rows:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
        scale *= den
    return out, scale


def _rank_rows(rows: list[Sequence[Scalar]], field: FieldSpec) -> int:
    if not rows:
        return 0
    if field.kind is FieldKind.GF2:
        return _rank_gf2_bits(sum(1 << j for j, x in enumerate(r) if x) for r in rows)
    if field.kind is FieldKind.GFP:
        return _rank_mod_p([list(r) for r in rows], field.p)
    ints, _ = _integer_rows(rows)
    return _bareiss(ints)[0]


def column_rank(columns: Sequence[Sequence[Scalar]], field: FieldSpec) -> int:
    """Rank of a list of column vectors, already reduced into `field`."""
    return _rank_rows(list(columns), field)


class EchelonBasis:
    """Persistent echelon basis for incremental independence tests.

    `extended` never mutates; it returns a new basis, or None when the
    vector lies in the span. Over GF(2) vectors are packed into ints.
    """

    __slots__ = ("field", "_vectors")

    def __init__(self, field: FieldSpec, vectors: tuple = ()):
        self.field = field
        self._vectors = vectors

    def __len__(self) -> int:
        return len(self._vectors)

    def _residual(self, vector: Sequence[Scalar]):
        field = self.field
        if field.kind is FieldKind.GF2:
            bits = vector if isinstance(vector, int) else sum(1 << j for j, x in enumerate(vector) if x % 2)
            for pivot, b in self._vectors:
                if bits >> pivot & 1:
                    bits ^= b
            return bits
        v = [field.reduce(x) for x in vector]
        for pivot, b in self._vectors:
            c = v[pivot]
            if c:
                v = [field.reduce(x - c * y) for x, y in zip(v, b)]
        return v

    def contains(self, vector: Sequence[Scalar]) -> bool:
        residual = self._residual(vector)
        return not residual if isinstance(residual, int) else not any(residual)

    def extended(self, vector: Sequence[Scalar]) -> Optional["EchelonBasis"]:
        residual = self._residual(vector)
        if isinstance(residual, int):
            if not residual:
                return None
            pivot = residual.bit_length() - 1
            # keep every stored vector reduced at the new pivot
            vectors = tuple((p, b ^ residual if b >> pivot & 1 else b) for p, b in self._vectors)
            return EchelonBasis(self.field, vectors + ((pivot, residual),))
        pivot = next((j for j, x in enumerate(residual) if x), None)
        if pivot is None:
            return None
        inv = self.field.inverse(residual[pivot])
        residual = [self.field.reduce(x * inv) for x in residual]
        return EchelonBasis(self.field, self._vectors + ((pivot, residual),))


# ----------------------------------------------------------------------
# Public operations
# ----------------------------------------------------------------------

def rank(m: ExactMatrix, restrict_cols: Optional[Iterable[Label]] = None) -> int:
    """Rank of m (or of the chosen columns) over m.field."""
    cols = m.cols if restrict_cols is None else tuple(restrict_cols)
    positions = m._col_positions(cols)
    columns = [[row[j] for row in m._data] for j in positions]
    return _rank_rows(columns, m.field)


def determinant(m: ExactMatrix) -> Scalar:
    """Exact determinant; integer matrices use Bareiss fraction-free elimination."""
    n, k = m.shape
    if n != k:
        raise DomainError(f"determinant of a non-square {n}x{k} matrix")
    if n == 0:
        return 1
    if m.field.kind is FieldKind.RATIONAL:
        ints, scale = _integer_rows(m._data)
        det = _bareiss(ints)[1]
        return m.field.reduce(Fraction(det, scale))
    return _det_mod_p([list(r) for r in m._data], m.field.p)


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix given as rows."""
    if not rows:
        return 1
    if any(len(r) != len(rows) for r in rows):
        raise DomainError("determinant of a non-square matrix")
    return _bareiss([list(r) for r in rows])[1]


def nullity(m: ExactMatrix) -> int:
    return len(m.cols) - rank(m)


@dataclass(frozen=True)
class Gf2Solution:
    """Outcome of a GF(2) solve: a solution, or the rows summing to 0 = 1."""
    solution: Optional[dict]
    certificate: tuple = ()

    @property
    def consistent(self) -> bool:
        return self.solution is not None


def solve_gf2_certified(a: ExactMatrix, b: Mapping[Label, int]) -> Gf2Solution:
    """Gauss-Jordan over GF(2) with row-combination tracking.

    Free variables are set to 0. When inconsistent, the certificate lists the
    original rows whose sum reads 0 = 1, namely the first such combination in
    the fixed elimination order.
    """
    if a.field.kind is not FieldKind.GF2:
        raise DomainError("solve_gf2 needs a GF(2) matrix")
    if set(b) != set(a.rows):
        raise DomainError("right-hand side must be indexed by the matrix rows")
    ncols = len(a.cols)
    rhs_bit = 1 << ncols
    work = []
    for i, (r, row) in enumerate(zip(a.rows, a._data)):
        bits = sum(1 << j for j, x in enumerate(row) if x)
        if int(b[r]) % 2:
            bits |= rhs_bit
        work.append([bits, 1 << i])

    pivot_cols = []
    top = 0
    for c in range(ncols):
        bit = 1 << c
        piv = next((i for i in range(top, len(work)) if work[i][0] & bit), None)
        if piv is None:
            continue
        work[top], work[piv] = work[piv], work[top]
        pbits, pcomb = work[top]
        for i in range(len(work)):
            if i != top and work[i][0] & bit:
                work[i][0] ^= pbits
                work[i][1] ^= pcomb
        pivot_cols.append(c)
        top += 1

    for bits, comb in work[top:]:
        if bits & rhs_bit:
            rows = tuple(a.rows[i] for i in range(len(a.rows)) if comb >> i & 1)
            return Gf2Solution(None, rows)

    x = {c: 0 for c in a.cols}
    for k, c in enumerate(pivot_cols):
        x[a.cols[c]] = 1 if work[k][0] & rhs_bit else 0
    return Gf2Solution(x)


def solve_gf2(a: ExactMatrix, b: Mapping[Label, int]) -> Optional[dict]:
    """Some x with a·x = b over GF(2), or None when inconsistent."""
    return solve_gf2_certified(a, b).solution


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[Label]]:
    """Reduced row echelon form (same row labels) and the pivot column labels."""
    field = m.field
    data = [list(r) if field.kind is not FieldKind.RATIONAL else [Fraction(x) for x in r]
            for r in m._data]
    nrows, ncols = m.shape
    pivots = []
    top = 0
    for c in range(ncols):
        if top == nrows:
            break
        piv = next((i for i in range(top, nrows) if data[i][c] != 0), None)
        if piv is None:
            continue
        data[top], data[piv] = data[piv], data[top]
        inv = field.inverse(data[top][c])
        data[top] = [field.reduce(x * inv) for x in data[top]]
        for i in range(nrows):
            f = data[i][c]
            if i != top and f != 0:
                data[i] = [field.reduce(x - f * y) for x, y in zip(data[i], data[top])]
        pivots.append(m.cols[c])
        top += 1
    return ExactMatrix(m.rows, m.cols, data, field), pivots


def nullspace(m: ExactMatrix) -> list[dict]:
    """Basis of {x : m·x = 0}, one dict (column → scalar) per free column."""
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in m.cols:
        if free in pivot_set:
            continue
        vec = {c: 0 for c in m.cols}
        vec[free] = 1
        for k, p in enumerate(pivots):
            vec[p] = m.field.reduce(-reduced.entry(reduced.rows[k], free))
        basis.append(vec)
    return basis
