"""String-differential forms ``x^m y^n (x) Lambda^* M`` on one chart."""
import dataclasses
import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from toricvoa.geometry.cone import Cone, contains_coords, degree_vector, points_at_height
from toricvoa.fock.orbifold import box_coefficients
from toricvoa.geometry.lattice import N, Coords, LatticeVector, dot
from toricvoa.linalg.cohomology import CohomologySpace, cohomology_dim
from toricvoa.linalg.sparse import SparseMatrix, kernel_basis, rank
from toricvoa.utils.errors import InputError, NilpotencyError, SideMismatchError

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
BlockKey = Tuple[Coords, int]


class StringForm(NamedTuple):
    """
    Basis element ``w x^m y^n`` with ``m . n == 0``.

    ``word`` lists the indices of the basis vectors ``e_i`` of M in
    increasing order.
    """

    m: Coords
    n: Coords
    word: Word

    def __str__(self) -> str:
        wedge = "^".join(f"e{i + 1}" for i in self.word) or "1"
        m = ",".join(str(c) for c in self.m)
        n = ",".join(str(c) for c in self.n)
        return f"{wedge} x({m}) y({n})"


def sort_key(form: StringForm) -> Tuple[int, Coords, Word]:
    return (len(form.word), form.n, form.word)


def contract(n: Coords, word: Word) -> List[Tuple[Word, int]]:
    """``contr(n)`` on ``e_{i_0} ^ ... ^ e_{i_k}`` as ``(word, coefficient)`` pairs."""
    result = []
    for position, i in enumerate(word):
        if n[i]:
            sign = -1 if position % 2 else 1
            result.append((word[:position] + word[position + 1 :], sign * n[i]))
    return result


def wedge(word: Word, m: Coords) -> List[Tuple[Word, int]]:
    """``word ^ m`` as ``(word, coefficient)`` pairs."""
    result = []
    for i, value in enumerate(m):
        if value and i not in word:
            after = sum(1 for j in word if j > i)
            sign = -1 if after % 2 else 1
            result.append((tuple(sorted(word + (i,))), sign * value))
    return result


def chart_degree(cone: Cone) -> Coords:
    if cone.degree is not None:
        return cone.degree.coords
    return degree_vector(cone).coords


def in_dual(cone: Cone, m: Coords) -> bool:
    """Whether ``m`` pairs non-negatively with every generator of ``cone``."""
    return all(dot(m, g.coords) >= 0 for g in cone.generators)


def forms_at(cone: Cone, degree: Coords, m: Coords, j_value: int) -> List[StringForm]:
    """All forms on the chart of ``cone`` with A[0] charge ``m`` and ``J = |word| + degree . n``."""
    if not in_dual(cone, m):
        return []
    rank = cone.rank
    forms = []
    for u in range(max(j_value - rank, 0), j_value + 1):
        words = list(itertools.combinations(range(rank), j_value - u))
        for n in points_at_height(cone, degree, u):
            if dot(m, n):
                continue
            forms.extend(StringForm(tuple(m), n, word) for word in words)
    return sorted(forms, key=sort_key)


@dataclasses.dataclass
class StringComplexSlice:
    """
    String-differential forms on one chart with their two differentials.

    The BRST differential ``sum g_n y^n contr(n)`` and the de Rham differential
    ``w -> w ^ m`` both preserve ``m``; blocks are keyed by ``(m, J)``.

    Parameters
    ----------
    cone : Cone
        The chart cone in N.
    degree : Tuple[int, ...]
        ``deg_C`` used for the J grading.
    g : Dict[Tuple[int, ...], Fraction]
        Coefficients of the BRST summands.
    truncation : int
        Largest ``|m|_1`` included.
    j_max : int
        Largest J included.
    """

    cone: Cone
    degree: Coords
    g: Dict[Coords, Fraction]
    truncation: int
    j_max: int
    blocks: Dict[BlockKey, List[StringForm]] = dataclasses.field(default_factory=dict)
    brst: Dict[BlockKey, SparseMatrix] = dataclasses.field(default_factory=dict)
    de_rham: Dict[BlockKey, SparseMatrix] = dataclasses.field(default_factory=dict)

    @property
    def charges(self) -> List[Coords]:
        return sorted({m for m, _ in self.blocks})

    def basis(self) -> List[StringForm]:
        return [form for key in sorted(self.blocks) for form in self.blocks[key]]

    def block(self, m: Coords, j_value: int) -> List[StringForm]:
        return self.blocks.get((tuple(m), j_value), [])

    def brst_cohomology(self) -> Dict[BlockKey, int]:
        """Dimension of the BRST cohomology per ``(m, J)``."""
        return {key: cohomology_dim(self.brst[key]) for key in sorted(self.blocks) if key[1] <= self.j_max}

    def check_differentials(self) -> None:
        """
        Verify ``BRST^2 = 0``, ``d^2 = 0`` and ``BRST d + d BRST = 0`` on every block.

        Raises
        ------
        NilpotencyError
            Naming the failing identity and block.
        """
        for (m, j_value), brst in sorted(self.brst.items()):
            if not (brst @ brst).is_zero():
                raise NilpotencyError(f"BRST does not square to zero on block m={m} J={j_value}.")
            d = self.de_rham.get((m, j_value))
            following = self.de_rham.get((m, j_value + 1))
            if d is not None and following is not None and not (following @ d).is_zero():
                raise NilpotencyError(f"d does not square to zero on block m={m} J={j_value}.")
            upper = self.brst.get((m, j_value + 1))
            if d is not None and upper is not None and not (upper @ d + d @ brst).is_zero():
                raise NilpotencyError(f"BRST and d do not anticommute on block m={m} J={j_value}.")


def _charges(rank: int, truncation: int) -> List[Coords]:
    span = range(-truncation, truncation + 1)
    return sorted(m for m in itertools.product(span, repeat=rank) if sum(abs(c) for c in m) <= truncation)


def _brst_matrix(forms: Sequence[StringForm], g: Mapping[Coords, Fraction]) -> SparseMatrix:
    index = {form: i for i, form in enumerate(forms)}
    matrix = SparseMatrix(len(forms), len(forms))
    for col, form in enumerate(forms):
        for ray, value in g.items():
            if not value or dot(form.m, ray):
                continue
            n = tuple(a + b for a, b in zip(form.n, ray))
            for word, coefficient in contract(ray, form.word):
                matrix.add_entry(index[StringForm(form.m, n, word)], col, value * coefficient)
    return matrix


def _de_rham_matrix(source: Sequence[StringForm], target: Sequence[StringForm]) -> SparseMatrix:
    index = {form: i for i, form in enumerate(target)}
    matrix = SparseMatrix(len(target), len(source))
    for col, form in enumerate(source):
        for word, coefficient in wedge(form.word, form.m):
            matrix.add_entry(index[StringForm(form.m, form.n, word)], col, coefficient)
    return matrix


def build_string_complex(
    cone: Cone,
    g: Optional[Mapping[Coords, Fraction]] = None,
    truncation: int = 2,
    j_max: Optional[int] = None,
    charges: Optional[Iterable[Coords]] = None,
    degree: Optional[Coords] = None,
) -> StringComplexSlice:
    """
    Assemble the string-differential forms of a chart and their differentials.

    Blocks are built up to ``J = j_max + 1`` so that the de Rham map out of
    every reported block is complete.

    Parameters
    ----------
    cone : Cone
        Gorenstein cone in N.
    g : Optional[Mapping[Tuple[int, ...], Fraction]]
        BRST coefficients on points of height one; 1 on every ray by default.
    truncation : int
        Largest ``|m|_1`` of the charges included.
    j_max : Optional[int]
        Largest reported J; ``2 * rank`` by default.
    charges : Optional[Iterable[Tuple[int, ...]]]
        Explicit charges ``m`` replacing the truncation.
    degree : Optional[Tuple[int, ...]]
        ``deg_C``; taken from the cone or computed when missing.

    Raises
    ------
    NotGorensteinError
        If the cone has no integral degree vector.
    InputError
        If a coefficient sits on a point outside the cone or off height one.

    Examples
    --------
    >>> slice_ = build_string_complex(Cone.from_coords([(1,)], "N"), truncation=1)
    >>> slice_.brst_cohomology()[((0,), 1)]
    0
    """
    if cone.side != N:
        raise SideMismatchError(f"String forms need a cone in N, got {cone}.")
    degree = tuple(degree) if degree is not None else chart_degree(cone)
    coefficients = {g_.coords: Fraction(1) for g_ in cone.generators} if g is None else dict(g)
    for point in coefficients:
        if dot(degree, point) != 1 or not contains_coords(cone, point):
            raise InputError(f"BRST coefficient at {point} is not on a height-one point of {cone}.")
    rank = cone.rank
    j_top = 2 * rank if j_max is None else j_max
    chosen = sorted({tuple(m) for m in charges}) if charges is not None else _charges(rank, truncation)
    slice_ = StringComplexSlice(cone, degree, {k: Fraction(v) for k, v in coefficients.items()}, truncation, j_top)
    for m in chosen:
        for j_value in range(0, j_top + 2):
            forms = forms_at(cone, degree, m, j_value)
            if forms:
                slice_.blocks[(m, j_value)] = forms
    for key, forms in slice_.blocks.items():
        slice_.brst[key] = _brst_matrix(forms, slice_.g)
    for (m, j_value), forms in slice_.blocks.items():
        if j_value <= j_top:
            target = slice_.blocks.get((m, j_value + 1), [])
            slice_.de_rham[(m, j_value)] = _de_rham_matrix(forms, target)
    logger.debug("string complex on %s: %d blocks, %d forms", cone, len(slice_.blocks), len(slice_.basis()))
    return slice_


def j_bigrading(slice_: StringComplexSlice) -> Dict[Tuple[int, int], int]:
    """
    BRST cohomology dimensions by ``(J, form degree)``.

    The BRST differential lowers the word length, so forms of word length at
    most ``k`` span a subcomplex; the form degree of a class is the first ``k``
    whose subcomplex represents it.
    """
    table: Dict[Tuple[int, int], int] = {}
    for (m, j_value), forms in sorted(slice_.blocks.items()):
        if j_value > slice_.j_max:
            continue
        brst = slice_.brst[(m, j_value)]
        space = CohomologySpace(len(forms), brst, brst)
        previous = 0
        for length in sorted({len(f.word) for f in forms}):
            keep = [i for i, f in enumerate(forms) if len(f.word) <= length]
            dim = _filtered_dim(brst, keep, space)
            if dim > previous:
                key = (j_value, length)
                table[key] = table.get(key, 0) + dim - previous
            previous = dim
    return dict(sorted(table.items()))


def _filtered_dim(brst: SparseMatrix, keep: Sequence[int], space: CohomologySpace) -> int:
    """Dimension of the span of classes represented by cycles supported on ``keep``."""
    restricted = SparseMatrix(brst.n_rows, len(keep))
    for col, source in enumerate(keep):
        for row, value in brst.column(source).items():
            restricted.add_entry(row, col, value)
    cycles = [space.coordinates({keep[i]: c for i, c in v.items()}) for v in kernel_basis(restricted)]
    if not cycles:
        return 0
    return rank(SparseMatrix.from_columns(space.dimension, cycles))


def box_sector(cone: Cone, n: Coords) -> Coords:
    """The Box element congruent to ``n`` modulo the lattice spanned by the rays."""
    alphas = box_coefficients(cone, LatticeVector(tuple(n), N))
    floors = [int(math.floor(a)) for a in alphas]
    shift = [sum(f * g.coords[axis] for f, g in zip(floors, cone.generators)) for axis in range(cone.rank)]
    return tuple(c - s for c, s in zip(n, shift))


def sector_cohomology(slice_: StringComplexSlice) -> Dict[Tuple[Coords, int, Coords], int]:
    """
    BRST cohomology split by Box sector of ``n`` for a simplicial chart.

    Returns
    -------
    Dict[Tuple[Tuple[int, ...], int, Tuple[int, ...]], int]
        ``{(m, J, box element): dim}``, zero entries omitted.
    """
    table: Dict[Tuple[Coords, int, Coords], int] = {}
    for (m, j_value), forms in sorted(slice_.blocks.items()):
        if j_value > slice_.j_max:
            continue
        brst = slice_.brst[(m, j_value)]
        sectors: Dict[Coords, List[int]] = {}
        for i, form in enumerate(forms):
            sectors.setdefault(box_sector(slice_.cone, form.n), []).append(i)
        for sector, indices in sorted(sectors.items()):
            dim = cohomology_dim(brst.submatrix(indices, indices))
            if dim:
                table[(m, j_value, sector)] = dim
    return table
