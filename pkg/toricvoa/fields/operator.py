import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List

from toricvoa.fock.enumerate import Block
from toricvoa.fock.state import FockState, StateVector
from toricvoa.linalg.sparse import SparseMatrix, SparseVector
from toricvoa.utils.errors import BlockClosureError

logger = logging.getLogger(__name__)

StateMap = Callable[[StateVector], StateVector]


@dataclasses.dataclass
class BlockOperator:
    """
    An operator restricted to a map between two finite blocks.

    Attributes
    ----------
    source : Block
        Domain block; column ``j`` is the image of ``source.basis[j]``.
    target : Block
        Codomain block.
    matrix : SparseMatrix
        Exact matrix in the canonical bases.
    """

    source: Block
    target: Block
    matrix: SparseMatrix

    def apply(self, v: StateVector) -> StateVector:
        coordinates = vector_to_coordinates(v, self.source)
        image = self.matrix.apply(coordinates)
        return coordinates_to_vector(image, self.target)

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator(other.source, self.target, self.matrix @ other.matrix)


def vector_to_coordinates(v: StateVector, block: Block) -> SparseVector:
    """
    Coordinates of ``v`` in the basis of ``block``.

    Raises
    ------
    BlockClosureError
        If ``v`` has a component outside the block.
    """
    result = {}
    for state, coefficient in v.items():
        index = block.get_index(state)
        if index is None:
            raise BlockClosureError(f"State {state} lies outside the block {block.label()}.")
        result[index] = coefficient
    return result


def coordinates_to_vector(coordinates: SparseVector, block: Block) -> StateVector:
    return StateVector({block.basis[i]: c for i, c in coordinates.items()})


def assemble_operator(apply: StateMap, source: Block, target: Block, workers: int = 1) -> BlockOperator:
    """
    Matrix of ``apply`` from ``source`` to ``target``, one column per basis state.

    Parameters
    ----------
    apply : Callable[[StateVector], StateVector]
        Linear map on state vectors.
    source : Block
        Domain block.
    target : Block
        Codomain block; every image must lie in it.
    workers : int
        Number of threads used for the columns.

    Raises
    ------
    BlockClosureError
        If an image leaves the target block.
    """

    def column(state: FockState) -> SparseVector:
        image = apply(StateVector.basis(state))
        try:
            return vector_to_coordinates(image, target)
        except BlockClosureError as err:
            raise BlockClosureError(f"Image of {state} leaves the target block {target.label()}.") from err

    if workers > 1 and len(source) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            columns: List[SparseVector] = list(executor.map(column, source.basis))
    else:
        columns = [column(state) for state in source.basis]
    matrix = SparseMatrix.from_columns(len(target), columns)
    logger.debug("assembled %s -> %s: %s", source.label(), target.label(), matrix)
    return BlockOperator(source, target, matrix)
