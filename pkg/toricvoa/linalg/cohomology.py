import logging
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from toricvoa.utils.errors import MathematicalFailure, NilpotencyError

from .sparse import EchelonBasis, SparseMatrix, SparseVector, kernel_basis, rank

logger = logging.getLogger(__name__)


def first_nonzero_column(matrix: SparseMatrix) -> Optional[int]:
    columns = {c for row in matrix.rows.values() for c in row}
    return min(columns) if columns else None


def cohomology_dim(d: SparseMatrix, verify: bool = True) -> int:
    """
    Cohomology of a nilpotent endomorphism of one block: ``dim - 2 rank(d)``.

    Parameters
    ----------
    d : SparseMatrix
        Square matrix with ``d @ d == 0``.
    verify : bool
        Check ``d @ d == 0`` first.

    Raises
    ------
    NilpotencyError
        If ``d`` does not square to zero; the witness is the first offending column.

    Examples
    --------
    >>> cohomology_dim(SparseMatrix(2, 2, {(1, 0): 1}))
    0
    """
    if d.n_rows != d.n_cols:
        raise ValueError(f"Invalid operator shape {d.shape}. Valid operators are square.")
    if verify:
        square = d @ d
        if not square.is_zero():
            witness = first_nonzero_column(square)
            raise NilpotencyError(f"Operator does not square to zero (basis vector {witness}).", witness)
    return d.n_cols - 2 * rank(d)


def charge_graded_cohomology(
    dims: Mapping[int, int], differentials: Mapping[int, SparseMatrix], verify: bool = True
) -> Dict[int, int]:
    """
    Cohomology of a cochain complex split into charge slices.

    Parameters
    ----------
    dims : Mapping[int, int]
        Dimension of each slice ``C^c``.
    differentials : Mapping[int, SparseMatrix]
        ``d_c : C^c -> C^{c+1}``; missing maps are zero.
    verify : bool
        Check that consecutive compositions vanish.

    Returns
    -------
    Dict[int, int]
        ``dim C^c - rank d_c - rank d_{c-1}`` per slice.

    Raises
    ------
    NilpotencyError
        If ``d_{c+1} d_c`` is non-zero for some ``c``.
    """
    for c, d in differentials.items():
        if d.shape != (dims.get(c + 1, 0), dims.get(c, 0)):
            raise ValueError(f"Invalid differential shape {d.shape} at slice {c}.")
    if verify:
        for c, d in differentials.items():
            following = differentials.get(c + 1)
            if following is not None:
                square = following @ d
                if not square.is_zero():
                    witness = first_nonzero_column(square)
                    message = f"d_{c + 1} d_{c} is non-zero (basis vector {witness} of slice {c})."
                    raise NilpotencyError(message, witness)
    ranks = {c: rank(d) for c, d in differentials.items()}
    result = {c: dims[c] - ranks.get(c, 0) - ranks.get(c - 1, 0) for c in sorted(dims)}
    logger.debug("graded cohomology %s", result)
    return result


class CohomologySpace:
    """
    Cycles modulo boundaries at one spot of a complex, with chosen representatives.

    Parameters
    ----------
    dim : int
        Dimension of the ambient space.
    incoming : Optional[SparseMatrix]
        Differential into the space.
    outgoing : Optional[SparseMatrix]
        Differential out of the space.
    """

    def __init__(self, dim: int, incoming: Optional[SparseMatrix] = None, outgoing: Optional[SparseMatrix] = None):
        self.ambient_dim = dim
        if outgoing is not None and outgoing.n_rows:
            cycles = kernel_basis(outgoing)
        else:
            cycles = [{i: Fraction(1)} for i in range(dim)]
        self._span = EchelonBasis()
        if incoming is not None:
            for column in incoming.columns():
                if column:
                    self._span.add(column)
        self._rep_index: Dict[int, int] = {}
        self.representatives: List[SparseVector] = []
        for cycle in cycles:
            index = self._span.size
            if self._span.add(cycle):
                self._rep_index[index] = len(self.representatives)
                self.representatives.append(cycle)

    @property
    def dimension(self) -> int:
        return len(self.representatives)

    def coordinates(self, cycle: SparseVector) -> SparseVector:
        """
        Class of ``cycle`` in the basis of representatives.

        Raises
        ------
        MathematicalFailure
            If ``cycle`` is not a cycle.
        """
        combination = self._span.coordinates(cycle)
        if combination is None:
            raise MathematicalFailure("Vector is not a cycle of this complex.")
        return {self._rep_index[i]: c for i, c in combination.items() if i in self._rep_index}


def induced_map(f: SparseMatrix, source: CohomologySpace, target: CohomologySpace) -> SparseMatrix:
    """Matrix of the map induced by the chain map ``f`` on cohomology."""
    columns = [target.coordinates(f.apply(rep)) for rep in source.representatives]
    return SparseMatrix.from_columns(target.dimension, columns)


def cohomology_of_sequence(dims: Sequence[int], maps: Sequence[SparseMatrix]) -> List[int]:
    """Cohomology of ``C_0 -> C_1 -> ...`` given as a list; ``maps[i] : C_i -> C_{i+1}``."""
    ranks = [rank(m) for m in maps]
    return [dims[i] - (ranks[i] if i < len(ranks) else 0) - (ranks[i - 1] if i > 0 else 0) for i in range(len(dims))]
