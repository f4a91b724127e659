from fractions import Fraction
from typing import List

import pytest

from toricvoa.linalg import (
    CohomologySpace,
    DoubleComplex,
    EchelonBasis,
    SparseMatrix,
    charge_graded_cohomology,
    cohomology_dim,
    cohomology_of_sequence,
    induced_map,
    kernel_basis,
    rank,
    solve,
    stabilize,
)
from toricvoa.utils.errors import NilpotencyError, NotStabilizedError

from .test_utils import dense_rank

rank_table = [
    pytest.param([[1, 2], [2, 4]], id="rank_one"),
    pytest.param([[0, 0], [0, 0]], id="zero"),
    pytest.param([[1, 2, 3], [4, 5, 6], [7, 8, 10]], id="full"),
    pytest.param([[Fraction(1, 3), 1, 0, 2], [0, 0, 1, 1], [Fraction(2, 3), 2, 1, 5]], id="fractions"),
    pytest.param([[3, -6, 9], [-1, 2, -3], [0, 0, 0], [5, 1, 7]], id="integer_rows"),
]


@pytest.mark.parametrize("rows", rank_table)
def test_rank_matches_dense_oracle(rows: List[List[Fraction]]) -> None:
    matrix = SparseMatrix.from_dense(rows)
    assert rank(matrix) == dense_rank(matrix)


@pytest.mark.parametrize("rows", rank_table)
def test_kernel_basis(rows: List[List[Fraction]]) -> None:
    matrix = SparseMatrix.from_dense(rows)
    kernel = kernel_basis(matrix)
    assert len(kernel) == matrix.n_cols - rank(matrix)
    for vector in kernel:
        assert not matrix.apply(vector)


def test_solve() -> None:
    matrix = SparseMatrix.from_dense([[2, 0], [0, 3]])
    assert solve(matrix, {0: 1, 1: 1}) == {0: Fraction(1, 2), 1: Fraction(1, 3)}
    assert solve(SparseMatrix.from_dense([[1], [1]]), {0: 1}) is None


def test_echelon_basis() -> None:
    basis = EchelonBasis()
    assert basis.add({0: Fraction(1), 1: Fraction(1)})
    assert basis.add({1: Fraction(1)})
    assert not basis.add({0: Fraction(2), 1: Fraction(5)})
    assert basis.dimension == 2


def test_cohomology_dim() -> None:
    assert cohomology_dim(SparseMatrix(2, 2, {(1, 0): 1})) == 0
    assert cohomology_dim(SparseMatrix(3, 3, {(1, 0): 1})) == 1
    with pytest.raises(NilpotencyError):
        cohomology_dim(SparseMatrix.identity(2))
    with pytest.raises(ValueError):
        cohomology_dim(SparseMatrix(2, 3))


def test_charge_graded_cohomology() -> None:
    d0 = SparseMatrix.from_dense([[1], [0]])
    d1 = SparseMatrix.from_dense([[0, 1]])
    assert charge_graded_cohomology({0: 1, 1: 2, 2: 1}, {0: d0, 1: d1}) == {0: 0, 1: 0, 2: 0}
    assert charge_graded_cohomology({0: 1, 1: 2, 2: 1}, {0: d0}) == {0: 0, 1: 1, 2: 1}
    bad = SparseMatrix.from_dense([[1, 0]])
    with pytest.raises(NilpotencyError):
        charge_graded_cohomology({0: 1, 1: 2, 2: 1}, {0: d0, 1: bad})


def test_cohomology_of_sequence() -> None:
    maps = [SparseMatrix.from_dense([[1], [1]]), SparseMatrix.from_dense([[1, -1]])]
    assert cohomology_of_sequence([1, 2, 1], maps) == [0, 0, 0]


def test_induced_map_on_cohomology() -> None:
    # 0 -> k -> 0 in both complexes, f = 2
    source = CohomologySpace(1)
    target = CohomologySpace(1)
    assert source.dimension == 1
    assert induced_map(SparseMatrix.from_dense([[2]]), source, target) == SparseMatrix.from_dense([[2]])


def _square(sign_twist: bool) -> DoubleComplex:
    one = SparseMatrix.identity(1)
    cells = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
    horizontal = {(0, 0): one, (0, 1): one}
    vertical = {(0, 0): one, (1, 0): one}
    return DoubleComplex(cells, horizontal, vertical, sign_twist)


def test_double_complex_total_cohomology() -> None:
    grid = _square(True)
    assert grid.check_squares()
    assert grid.total_cohomology() == {0: 0, 1: 0, 2: 0}
    assert grid.e2_page("vertical") == {cell: 0 for cell in grid.cells}
    assert grid.e2_page("horizontal") == {cell: 0 for cell in grid.cells}


def test_double_complex_sign_convention() -> None:
    with pytest.raises(NilpotencyError):
        _square(False).total_cohomology()


def test_double_complex_with_zero_maps() -> None:
    grid = DoubleComplex({(0, 0): 1, (1, 0): 1})
    assert grid.total_cohomology() == {0: 1, 1: 1}
    with pytest.raises(ValueError):
        grid.e2_page("diagonal")


def test_stabilize() -> None:
    report = stabilize(lambda cutoff: min(cutoff, 3), [1, 2, 3, 4, 5, 6], 3)
    assert report.stabilized
    assert report.stabilized_at == 3
    assert report.require() == 3
    assert [cutoff for cutoff, _ in report.sequence] == [1, 2, 3, 4, 5]


def test_not_stabilized() -> None:
    report = stabilize(lambda cutoff: cutoff, [1, 2, 3], 2)
    assert not report.stabilized
    assert report.value is None
    with pytest.raises(NotStabilizedError):
        report.require()
    with pytest.raises(ValueError):
        stabilize(lambda cutoff: cutoff, [2, 1])
