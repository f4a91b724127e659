"""Exact sparse matrices over the rationals and fraction-free elimination."""
import logging
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
SparseVector = Dict[int, Fraction]

# number of shortest rows inspected per Markowitz pivot search
_PIVOT_CANDIDATES = 4


class SparseMatrix:
    """
    Exact sparse matrix with rational entries, stored by rows.

    Parameters
    ----------
    n_rows : int
        Number of rows.
    n_cols : int
        Number of columns.
    entries : Optional[Dict[Tuple[int, int], Scalar]]
        Non-zero entries keyed by ``(row, col)``; zeros are dropped.

    Examples
    --------
    >>> m = SparseMatrix(2, 2, {(0, 1): 1})
    >>> (m @ m).is_zero()
    True
    """

    def __init__(self, n_rows: int, n_cols: int, entries: Optional[Dict[Tuple[int, int], Scalar]] = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError(f"Invalid shape ({n_rows}, {n_cols}).")
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rows: Dict[int, SparseVector] = {}
        for (r, c), value in (entries or {}).items():
            self.add_entry(r, c, value)

    @classmethod
    def from_columns(cls, n_rows: int, columns: Sequence[Dict[int, Scalar]]) -> "SparseMatrix":
        matrix = cls(n_rows, len(columns))
        for c, column in enumerate(columns):
            for r, value in column.items():
                matrix.add_entry(r, c, value)
        return matrix

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Scalar]]) -> "SparseMatrix":
        n_cols = len(rows[0]) if rows else 0
        matrix = cls(len(rows), n_cols)
        for r, row in enumerate(rows):
            for c, value in enumerate(row):
                matrix.add_entry(r, c, value)
        return matrix

    @classmethod
    def identity(cls, size: int) -> "SparseMatrix":
        return cls(size, size, {(i, i): 1 for i in range(size)})

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    def add_entry(self, r: int, c: int, value: Scalar) -> None:
        if not (0 <= r < self.n_rows and 0 <= c < self.n_cols):
            raise IndexError(f"Entry ({r}, {c}) outside shape {self.shape}.")
        if not value:
            return
        row = self.rows.setdefault(r, {})
        total = row.get(c, Fraction(0)) + Fraction(value)
        if total:
            row[c] = total
        else:
            del row[c]
            if not row:
                del self.rows[r]

    def get(self, r: int, c: int) -> Fraction:
        return self.rows.get(r, {}).get(c, Fraction(0))

    def entries(self) -> Iterable[Tuple[Tuple[int, int], Fraction]]:
        for r in sorted(self.rows):
            for c in sorted(self.rows[r]):
                yield (r, c), self.rows[r][c]

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def column(self, c: int) -> SparseVector:
        return {r: row[c] for r, row in self.rows.items() if c in row}

    def columns(self) -> List[SparseVector]:
        result: List[SparseVector] = [{} for _ in range(self.n_cols)]
        for r, row in self.rows.items():
            for c, value in row.items():
                result[c][r] = value
        return result

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.n_cols, self.n_rows, {(c, r): v for (r, c), v in self.entries()})

    def scaled(self, factor: Scalar) -> "SparseMatrix":
        return SparseMatrix(self.n_rows, self.n_cols, {k: v * factor for k, v in self.entries()})

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "SparseMatrix":
        """Matrix whose row ``i`` is row ``row_order[i]`` and column ``j`` is column ``col_order[j]``."""
        row_pos = {old: new for new, old in enumerate(row_order)}
        col_pos = {old: new for new, old in enumerate(col_order)}
        return SparseMatrix(self.n_rows, self.n_cols, {(row_pos[r], col_pos[c]): v for (r, c), v in self.entries()})

    def submatrix(self, row_indices: Sequence[int], col_indices: Sequence[int]) -> "SparseMatrix":
        """Restriction to the given rows and columns, renumbered in the given order."""
        row_pos = {old: new for new, old in enumerate(row_indices)}
        col_pos = {old: new for new, old in enumerate(col_indices)}
        entries = {(row_pos[r], col_pos[c]): v for (r, c), v in self.entries() if r in row_pos and c in col_pos}
        return SparseMatrix(len(row_pos), len(col_pos), entries)

    def apply(self, vector: SparseVector) -> SparseVector:
        result: SparseVector = {}
        for r, row in self.rows.items():
            total = sum((value * vector[c] for c, value in row.items() if c in vector), Fraction(0))
            if total:
                result[r] = total
        return result

    def _check_same_shape(self, other: "SparseMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch: {self.shape} vs {other.shape}.")

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check_same_shape(other)
        result = SparseMatrix(self.n_rows, self.n_cols, dict(self.entries()))
        for (r, c), value in other.entries():
            result.add_entry(r, c, value)
        return result

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + other.scaled(-1)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}.")
        result = SparseMatrix(self.n_rows, other.n_cols)
        for r, row in self.rows.items():
            for k, left in row.items():
                for c, right in other.rows.get(k, {}).items():
                    result.add_entry(r, c, left * right)
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def to_dense(self) -> List[List[Fraction]]:
        dense = [[Fraction(0)] * self.n_cols for _ in range(self.n_rows)]
        for (r, c), value in self.entries():
            dense[r][c] = value
        return dense

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz()})"


def _integer_row(row: SparseVector) -> Dict[int, int]:
    """Scale a rational row to coprime integers."""
    denominator = 1
    for value in row.values():
        denominator = denominator * value.denominator // gcd(denominator, value.denominator)
    ints = {c: int(v * denominator) for c, v in row.items()}
    return _primitive_row(ints)


def _primitive_row(row: Dict[int, int]) -> Dict[int, int]:
    content = 0
    for value in row.values():
        content = gcd(content, value)
    if content > 1:
        return {c: v // content for c, v in row.items()}
    return row


def _choose_pivot(
    rows: Dict[int, Dict[int, int]], col_count: Dict[int, int], excluded: Optional[int]
) -> Optional[Tuple[int, int]]:
    """Markowitz pivot: minimal ``(row fill - 1) * (column fill - 1)`` among the shortest rows."""
    eligible = [r for r in rows if any(c != excluded for c in rows[r])]
    candidates = sorted(eligible, key=lambda r: (len(rows[r]), r))[:_PIVOT_CANDIDATES]
    best: Optional[Tuple[int, int, int, int]] = None
    for r in candidates:
        row = rows[r]
        for c, value in row.items():
            if c == excluded:
                continue
            cost = (len(row) - 1) * (col_count.get(c, 1) - 1)
            key = (cost, abs(value), r, c)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return best[2], best[3]


def _eliminate(target: Dict[int, int], pivot_row: Dict[int, int], c: int) -> Dict[int, int]:
    """``p * target - a * pivot_row`` with the column ``c`` cleared, then made primitive."""
    p, a = pivot_row[c], target[c]
    g = gcd(p, a)
    p, a = p // g, a // g
    result = {k: p * v for k, v in target.items()}
    for k, v in pivot_row.items():
        value = result.get(k, 0) - a * v
        if value:
            result[k] = value
        else:
            result.pop(k, None)
    return _primitive_row(result)


def _echelon(
    matrix: SparseMatrix, reduce_all: bool, excluded: Optional[int] = None
) -> Tuple[List[Tuple[int, Dict[int, int]]], bool]:
    """
    Fraction-free elimination of the rows of ``matrix``.

    Returns the list of ``(pivot column, integer row)``; with ``reduce_all`` every
    pivot column is cleared from all other pivot rows (Gauss-Jordan form). The
    ``excluded`` column is never used as a pivot; the flag reports whether a row
    supported only on it remained.
    """
    active: Dict[int, Dict[int, int]] = {}
    col_count: Dict[int, int] = {}
    for r, row in matrix.rows.items():
        active[r] = _integer_row(row)
        for c in active[r]:
            col_count[c] = col_count.get(c, 0) + 1
    pivots: List[Tuple[int, Dict[int, int]]] = []
    while active:
        choice = _choose_pivot(active, col_count, excluded)
        if choice is None:
            return pivots, True
        r, c = choice
        pivot_row = active.pop(r)
        for k in pivot_row:
            col_count[k] -= 1
        for other in [s for s, row in active.items() if c in row]:
            old = active[other]
            for k in old:
                col_count[k] -= 1
            new = _eliminate(old, pivot_row, c)
            if new:
                active[other] = new
                for k in new:
                    col_count[k] = col_count.get(k, 0) + 1
            else:
                del active[other]
        if reduce_all:
            pivots = [(pc, _eliminate(row, pivot_row, c) if c in row else row) for pc, row in pivots]
        pivots.append((c, pivot_row))
    return pivots, False


def rank(matrix: SparseMatrix) -> int:
    """
    Exact rank by fraction-free elimination with Markowitz pivoting.

    Examples
    --------
    >>> rank(SparseMatrix.identity(3))
    3
    """
    if matrix.is_zero():
        return 0
    result = len(_echelon(matrix, reduce_all=False)[0])
    logger.debug("rank of %s = %d", matrix, result)
    return result


def kernel_basis(matrix: SparseMatrix) -> List[SparseVector]:
    """
    Exact basis of the right kernel, one vector per free column.

    Returns
    -------
    List[Dict[int, Fraction]]
        Sparse kernel vectors indexed by column.
    """
    pivots, _ = _echelon(matrix, reduce_all=True)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(matrix.n_cols):
        if free in pivot_cols:
            continue
        vector: SparseVector = {free: Fraction(1)}
        for c, row in pivots:
            if free in row:
                vector[c] = Fraction(-row[free], row[c])
        basis.append(vector)
    return basis


def solve(matrix: SparseMatrix, rhs: SparseVector) -> Optional[SparseVector]:
    """
    One exact solution of ``matrix @ x = rhs`` (free variables set to zero), or None.
    """
    augmented = SparseMatrix(matrix.n_rows, matrix.n_cols + 1, dict(matrix.entries()))
    for r, value in rhs.items():
        augmented.add_entry(r, matrix.n_cols, value)
    pivots, inconsistent = _echelon(augmented, reduce_all=True, excluded=matrix.n_cols)
    if inconsistent:
        return None
    solution: SparseVector = {}
    for c, row in pivots:
        value = Fraction(row.get(matrix.n_cols, 0), row[c])
        if value:
            solution[c] = value
    return solution


class EchelonBasis:
    """
    Incrementally built basis of a subspace, with coordinates of added vectors.

    Each stored vector is reduced against the earlier ones and remembers its
    expression in terms of the vectors passed to :meth:`add`.
    """

    def __init__(self) -> None:
        self._rows: List[Tuple[int, SparseVector, SparseVector]] = []
        self.size = 0

    def reduce(self, vector: SparseVector) -> Tuple[SparseVector, SparseVector]:
        """Return ``(remainder, combination)`` with ``vector = sum combination[i] added_i + remainder``."""
        remainder = dict(vector)
        combination: SparseVector = {}
        for pivot, row, combo in self._rows:
            value = remainder.get(pivot)
            if not value:
                continue
            for k, v in row.items():
                total = remainder.get(k, Fraction(0)) - value * v
                if total:
                    remainder[k] = total
                else:
                    remainder.pop(k, None)
            for k, v in combo.items():
                total = combination.get(k, Fraction(0)) + value * v
                if total:
                    combination[k] = total
                else:
                    combination.pop(k, None)
        return remainder, combination

    def add(self, vector: SparseVector) -> bool:
        """Add ``vector``; return False if it was already in the span."""
        remainder, combination = self.reduce(vector)
        index = self.size
        self.size += 1
        if not remainder:
            return False
        pivot = min(remainder)
        scale = remainder[pivot]
        row = {k: v / scale for k, v in remainder.items()}
        # remainder = vector - sum combination, so row = (added_index - sum combination) / scale
        combo = {k: -v / scale for k, v in combination.items()}
        combo[index] = combo.get(index, Fraction(0)) + 1 / scale
        self._rows.append((pivot, row, {k: v for k, v in combo.items() if v}))
        return True

    def coordinates(self, vector: SparseVector) -> Optional[SparseVector]:
        """Coordinates of ``vector`` in the added vectors, or None if it is outside the span."""
        remainder, combination = self.reduce(vector)
        return None if remainder else combination

    @property
    def dimension(self) -> int:
        return len(self._rows)
