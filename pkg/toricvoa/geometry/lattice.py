import dataclasses
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Sequence, Tuple

import dataclasses_json
import sympy

from toricvoa.utils.errors import SideMismatchError

M = "M"
N = "N"

Coords = Tuple[int, ...]


def other_side(side: str) -> str:
    return N if side == M else M


@dataclasses_json.dataclass_json
@dataclasses.dataclass(frozen=True, order=True)
class LatticeVector:
    """
    Integer point of the lattice M or its dual N.

    Parameters
    ----------
    coords : Tuple[int, ...]
        Coordinates in the fixed basis of the lattice.
    side : str
        Either ``"M"`` or ``"N"``.

    Examples
    --------
    >>> pairing(m_vector(1, 2), n_vector(3, -1))
    1
    """

    coords: Coords
    side: str

    def __post_init__(self) -> None:
        if self.side not in (M, N):
            raise SideMismatchError(f"Invalid lattice side {self.side!r}. Valid options are: 'M', 'N'.")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check_same(self, other: "LatticeVector") -> None:
        if other.side != self.side or other.rank != self.rank:
            raise SideMismatchError(f"Cannot combine {self} with {other}.")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        self._check_same(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.side)

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        self._check_same(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.side)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(tuple(-a for a in self.coords), self.side)

    def scaled(self, factor: int) -> "LatticeVector":
        return LatticeVector(tuple(factor * a for a in self.coords), self.side)

    def dual(self) -> "LatticeVector":
        """Same coordinates read on the other side of the pairing."""
        return LatticeVector(self.coords, other_side(self.side))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def m_vector(*coords: int) -> LatticeVector:
    return LatticeVector(tuple(coords), M)


def n_vector(*coords: int) -> LatticeVector:
    return LatticeVector(tuple(coords), N)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def pairing(m: LatticeVector, n: LatticeVector) -> int:
    """
    Integral pairing of an M-vector with an N-vector.

    Parameters
    ----------
    m : LatticeVector
        Vector on side M.
    n : LatticeVector
        Vector on side N.

    Returns
    -------
    int
        The dot product of the coordinates.

    Raises
    ------
    SideMismatchError
        If the sides are not (M, N) or the ranks differ.
    """
    if m.side != M or n.side != N:
        raise SideMismatchError(f"pairing expects an M-vector and an N-vector, got sides {m.side} and {n.side}.")
    if m.rank != n.rank:
        raise SideMismatchError(f"pairing rank mismatch: {m.rank} != {n.rank}.")
    return dot(m.coords, n.coords)


def primitive(coords: Sequence[int]) -> Coords:
    g = reduce(math.gcd, (abs(c) for c in coords), 0)
    if g <= 1:
        return tuple(coords)
    return tuple(c // g for c in coords)


def primitive_vector(v: LatticeVector) -> LatticeVector:
    return LatticeVector(primitive(v.coords), v.side)


def integer_nullspace(rows: Sequence[Sequence[int]], dim: int) -> List[Coords]:
    """
    Primitive integer basis of the rational nullspace of ``rows``.
    """
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)]
    basis = sympy.Matrix([list(r) for r in rows]).nullspace()
    result = []
    for vec in basis:
        values = [sympy.Rational(x) for x in vec]
        denominator = reduce(sympy.ilcm, (int(v.q) for v in values), 1)
        result.append(primitive([int(v * denominator) for v in values]))
    return result


def matrix_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    return int(sympy.Matrix([list(r) for r in rows]).rank())


def solve_rational(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Tuple[Fraction, ...]:
    """
    A rational solution of ``rows @ x = rhs`` with free parameters set to zero.

    Raises
    ------
    ValueError
        If the system is inconsistent.
    """
    dim = len(rows[0])
    symbols = sympy.symbols(f"x0:{dim}")
    system = sympy.Matrix([list(r) for r in rows]), sympy.Matrix(list(rhs))
    solutions = sympy.linsolve(system, *symbols)
    if not solutions:
        raise ValueError("inconsistent linear system")
    (solution,) = tuple(solutions)
    zero = {s: 0 for s in symbols}
    values = [sympy.Rational(value.subs(zero)) for value in solution]
    return tuple(Fraction(int(v.p), int(v.q)) for v in values)


def unique_vectors(vectors: Iterable[LatticeVector]) -> Tuple[LatticeVector, ...]:
    seen = []
    for v in vectors:
        if v not in seen:
            seen.append(v)
    return tuple(seen)
