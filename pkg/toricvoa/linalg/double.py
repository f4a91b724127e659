import dataclasses
import logging
from typing import Dict, List, Tuple

from toricvoa.utils.errors import NilpotencyError

from .cohomology import CohomologySpace, first_nonzero_column, induced_map
from .sparse import SparseMatrix, rank

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]

VERTICAL = "vertical"
HORIZONTAL = "horizontal"


@dataclasses.dataclass
class DoubleComplex:
    """
    Grid of finite blocks with commuting (or anticommuting) differentials.

    Parameters
    ----------
    cells : Dict[Tuple[int, int], int]
        Dimension of the cell at ``(p, q)``; ``p`` is the column (Cech level), ``q`` the row.
    horizontal : Dict[Tuple[int, int], SparseMatrix]
        Maps ``(p, q) -> (p + 1, q)``.
    vertical : Dict[Tuple[int, int], SparseMatrix]
        Maps ``(p, q) -> (p, q + 1)``.
    sign_twist : bool
        Multiply vertical differentials in odd columns by -1 when forming the total complex.
        Use it for grids whose squares commute.
    """

    cells: Dict[Cell, int]
    horizontal: Dict[Cell, SparseMatrix] = dataclasses.field(default_factory=dict)
    vertical: Dict[Cell, SparseMatrix] = dataclasses.field(default_factory=dict)
    sign_twist: bool = True

    def _zero(self, source: Cell, target: Cell) -> SparseMatrix:
        return SparseMatrix(self.cells.get(target, 0), self.cells.get(source, 0))

    def h(self, cell: Cell) -> SparseMatrix:
        p, q = cell
        return self.horizontal.get(cell) or self._zero(cell, (p + 1, q))

    def v(self, cell: Cell) -> SparseMatrix:
        p, q = cell
        return self.vertical.get(cell) or self._zero(cell, (p, q + 1))

    def total_degrees(self) -> List[int]:
        if not self.cells:
            return []
        degrees = [p + q for p, q in self.cells]
        return list(range(min(degrees), max(degrees) + 1))

    def _layout(self, t: int) -> Dict[Cell, int]:
        offsets: Dict[Cell, int] = {}
        offset = 0
        for cell in sorted(c for c in self.cells if c[0] + c[1] == t):
            offsets[cell] = offset
            offset += self.cells[cell]
        return offsets

    def total_dim(self, t: int) -> int:
        return sum(dim for (p, q), dim in self.cells.items() if p + q == t)

    def total_differential(self, t: int) -> SparseMatrix:
        """``D = h + s v`` from ``Tot^t`` to ``Tot^{t+1}``, with ``s = (-1)^p`` under the sign twist."""
        source, target = self._layout(t), self._layout(t + 1)
        result = SparseMatrix(self.total_dim(t + 1), self.total_dim(t))
        for cell, col_offset in source.items():
            p, q = cell
            sign = -1 if self.sign_twist and p % 2 else 1
            for block, image, factor in ((self.h(cell), (p + 1, q), 1), (self.v(cell), (p, q + 1), sign)):
                if image not in target:
                    continue
                for (r, c), value in block.entries():
                    result.add_entry(target[image] + r, col_offset + c, factor * value)
        return result

    def total_cohomology(self, verify: bool = True) -> Dict[int, int]:
        """
        Cohomology of the total complex per total degree.

        Raises
        ------
        NilpotencyError
            If ``D^2 != 0``; the grid squares do not match the sign convention.
        """
        degrees = self.total_degrees()
        maps = {t: self.total_differential(t) for t in [degrees[0] - 1] + degrees} if degrees else {}
        if verify:
            for t in degrees:
                square = maps[t] @ maps[t - 1]
                if not square.is_zero():
                    witness = first_nonzero_column(square)
                    raise NilpotencyError(
                        f"Total differential does not square to zero in degree {t - 1} (basis vector {witness}).",
                        witness,
                    )
        ranks = {t: rank(m) for t, m in maps.items()}
        result = {t: self.total_dim(t) - ranks.get(t, 0) - ranks.get(t - 1, 0) for t in degrees}
        logger.debug("total cohomology %s", result)
        return result

    def e2_page(self, first: str = VERTICAL) -> Dict[Cell, int]:
        """
        Dimensions of the second page of the spectral sequence taking ``first`` cohomology first.

        Parameters
        ----------
        first : str
            ``"vertical"`` or ``"horizontal"``.
        """
        if first not in (VERTICAL, HORIZONTAL):
            raise ValueError(f'Invalid first direction "{first}". Valid options are: "{VERTICAL}", "{HORIZONTAL}".')
        inner, outer = (self.v, self.h) if first == VERTICAL else (self.h, self.v)

        def before(cell: Cell) -> Cell:
            p, q = cell
            return (p, q - 1) if first == VERTICAL else (p - 1, q)

        def after(cell: Cell) -> Cell:
            p, q = cell
            return (p + 1, q) if first == VERTICAL else (p, q + 1)

        def before_outer(cell: Cell) -> Cell:
            p, q = cell
            return (p - 1, q) if first == VERTICAL else (p, q - 1)

        spaces = {
            cell: CohomologySpace(dim, inner(before(cell)) if before(cell) in self.cells else None, inner(cell))
            for cell, dim in self.cells.items()
        }
        induced_ranks: Dict[Cell, int] = {}
        for cell in self.cells:
            target = after(cell)
            if target in spaces and spaces[cell].dimension and spaces[target].dimension:
                induced_ranks[cell] = rank(induced_map(outer(cell), spaces[cell], spaces[target]))
        page = {}
        for cell in sorted(self.cells):
            page[cell] = spaces[cell].dimension - induced_ranks.get(cell, 0) - induced_ranks.get(before_outer(cell), 0)
        return page

    def check_squares(self) -> bool:
        """Whether ``h v == v h`` on every square (commuting grid)."""
        for cell in self.cells:
            p, q = cell
            left = self.v((p + 1, q)) @ self.h(cell)
            right = self.h((p, q + 1)) @ self.v(cell)
            if left != right:
                return False
        return True


def cech_total_cohomology(grid: DoubleComplex) -> Dict[int, int]:
    """
    Total cohomology of a Cech double complex whose vertical arrows are BRST operators.

    Raises
    ------
    NilpotencyError
        If the grid does not square to zero under its sign convention.
    """
    return grid.total_cohomology(verify=True)
