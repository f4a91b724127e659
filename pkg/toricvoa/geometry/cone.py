import dataclasses
import itertools
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from toricvoa.utils.errors import (
    CapabilityError,
    ConfigurationError,
    FinitenessError,
    NotGorensteinError,
    SideMismatchError,
)

from .lattice import (
    Coords,
    LatticeVector,
    dot,
    integer_nullspace,
    matrix_rank,
    other_side,
    primitive,
    solve_rational,
)

logger = logging.getLogger(__name__)

MAX_SUPPORTED_RANK = 4


def _facets(generators: Sequence[Coords], dim: int) -> Tuple[Tuple[Coords, ...], Tuple[Coords, ...]]:
    """
    Inequalities and equations cutting out the cone spanned by ``generators``.

    Returns primitive facet normals ``u`` (``u.v >= 0``) and an integer
    basis of the orthogonal complement of the span (``e.v == 0``).
    """
    equations = integer_nullspace(list(generators), dim)
    span_dim = matrix_rank(generators)
    normals: List[Coords] = []
    if span_dim == 0:
        return (), tuple(equations)
    for subset in itertools.combinations(generators, span_dim - 1):
        if matrix_rank(list(subset)) != span_dim - 1:
            continue
        candidates = integer_nullspace(list(subset) + list(equations), dim)
        if len(candidates) != 1:
            continue
        u = candidates[0]
        values = [dot(u, g) for g in generators]
        if all(v >= 0 for v in values):
            pass
        elif all(v <= 0 for v in values):
            u = tuple(-c for c in u)
        else:
            continue
        if u not in normals:
            normals.append(u)
    return tuple(sorted(normals)), tuple(equations)


def extremal_rays(generators: Sequence[Coords], dim: int) -> Tuple[Coords, ...]:
    """
    Drop every generator that lies in the cone spanned by the others.

    Generators are assumed primitive and distinct, so the result spans the
    same cone with one generator per extremal ray (both directions of a
    lineality space are kept).

    Examples
    --------
    >>> extremal_rays([(-1, 1), (0, 1), (1, 1)], 2)
    ((-1, 1), (1, 1))
    """
    kept = list(generators)
    for g in list(kept):
        others = [h for h in kept if h != g]
        if not others:
            continue
        normals, equations = _facets(others, dim)
        if all(dot(u, g) >= 0 for u in normals) and all(dot(e, g) == 0 for e in equations):
            kept = others
    return tuple(kept)


@dataclasses.dataclass(frozen=True)
class Cone:
    """
    Rational polyhedral cone with apex 0 given by primitive generators.

    Parameters
    ----------
    generators : Tuple[LatticeVector, ...]
        Primitive generators, all on one side of the pairing.
    degree : Optional[LatticeVector]
        Degree vector on the dual side with ``degree . g = 1`` for every generator.

    Attributes
    ----------
    facet_normals : Tuple[LatticeVector, ...]
        Primitive inward normals of the facets (dual side).
    equations : Tuple[LatticeVector, ...]
        Basis of the orthogonal complement of the span (dual side).
    """

    generators: Tuple[LatticeVector, ...]
    side: str
    rank: int
    degree: Optional[LatticeVector] = None
    facet_normals: Tuple[LatticeVector, ...] = dataclasses.field(default=(), compare=False, repr=False)
    equations: Tuple[LatticeVector, ...] = dataclasses.field(default=(), compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.rank > MAX_SUPPORTED_RANK:
            raise CapabilityError(f"Cones of rank {self.rank} are not supported (maximum {MAX_SUPPORTED_RANK}).")
        for g in self.generators:
            if g.side != self.side or g.rank != self.rank:
                raise SideMismatchError(f"Generator {g} does not live in {self.side} of rank {self.rank}.")
        if self.degree is not None:
            if self.degree.side != other_side(self.side):
                raise SideMismatchError(f"Degree vector {self.degree} must live on side {other_side(self.side)}.")
            for g in self.generators:
                if dot(self.degree.coords, g.coords) != 1:
                    value = dot(self.degree.coords, g.coords)
                    raise NotGorensteinError(f"Degree vector {self.degree} pairs to {value} with {g}.")
        normals, equations = _facets([g.coords for g in self.generators], self.rank)
        dual = other_side(self.side)
        object.__setattr__(self, "facet_normals", tuple(LatticeVector(u, dual) for u in normals))
        object.__setattr__(self, "equations", tuple(LatticeVector(e, dual) for e in equations))

    @classmethod
    def from_coords(
        cls, generators: Sequence[Sequence[int]], side: str, degree: Optional[Sequence[int]] = None
    ) -> "Cone":
        """
        Build a cone from raw coordinates.

        Generators are primitivized, deduplicated and reduced to one per
        extremal ray, so points inside the cone (such as non-vertex points
        of a polytope) may be listed freely.
        """
        gens: List[LatticeVector] = []
        for g in generators:
            v = LatticeVector(primitive(g), side)
            if v.is_zero():
                continue
            if v not in gens:
                gens.append(v)
        if gens:
            rank = gens[0].rank
        elif degree is not None:
            rank = len(degree)
        else:
            rank = len(generators[0]) if generators else 0
        if len(gens) > 1:
            rays = set(extremal_rays([v.coords for v in gens], rank))
            gens = [v for v in gens if v.coords in rays]
        deg = None if degree is None else LatticeVector(tuple(degree), other_side(side))
        return cls(tuple(sorted(gens)), side, rank, deg)

    @property
    def dim(self) -> int:
        return self.rank - len(self.equations)

    def is_simplicial(self) -> bool:
        return len(self.generators) == self.dim

    def generator_matrix(self) -> np.ndarray:
        return np.array([g.coords for g in self.generators], dtype=np.int64).reshape(len(self.generators), self.rank)

    def with_degree(self, degree: LatticeVector) -> "Cone":
        return Cone(self.generators, self.side, self.rank, degree)

    def __str__(self) -> str:
        return "cone(" + ",".join(str(g) for g in self.generators) + ")"


def cone_contains(cone: Cone, v: LatticeVector) -> bool:
    """
    True iff ``v`` pairs non-negatively with every facet normal and
    vanishes on every equation of ``cone``.
    """
    if v.side != cone.side:
        raise SideMismatchError(f"{v} is not on the side {cone.side} of {cone}.")
    return contains_coords(cone, v.coords)


def contains_coords(cone: Cone, coords: Sequence[int]) -> bool:
    for u in cone.facet_normals:
        if dot(u.coords, coords) < 0:
            return False
    for e in cone.equations:
        if dot(e.coords, coords) != 0:
            return False
    return True


def dual_cone(cone: Cone) -> Cone:
    """
    Dual cone ``{u : u . v >= 0 for all v in cone}``.

    Parameters
    ----------
    cone : Cone
        Cone of rank at most 4.

    Returns
    -------
    Cone
        The dual cone on the other side; a lineality space (for lower
        dimensional input) is represented by pairs of opposite generators.

    Raises
    ------
    CapabilityError
        If the rank is not supported.

    Examples
    --------
    >>> a1 = Cone.from_coords([(1, 0), (1, 2)], "N")
    >>> [str(g) for g in dual_cone(a1).generators]
    ['(0,1)', '(2,-1)']
    """
    if cone.rank > MAX_SUPPORTED_RANK:
        raise CapabilityError(f"dual_cone supports rank <= {MAX_SUPPORTED_RANK}, got {cone.rank}.")
    gens = [u.coords for u in cone.facet_normals]
    for e in cone.equations:
        gens.append(e.coords)
        gens.append(tuple(-c for c in e.coords))
    return Cone.from_coords(gens, other_side(cone.side)) if gens else Cone((), other_side(cone.side), cone.rank)


def intersect_cones(first: Cone, second: Cone) -> Cone:
    """Intersection of two cones on the same side."""
    if first.side != second.side:
        raise SideMismatchError(f"Cannot intersect {first} and {second}.")
    inequalities = list(first.facet_normals) + list(second.facet_normals)
    for e in list(first.equations) + list(second.equations):
        inequalities.append(e)
        inequalities.append(-e)
    if not inequalities:
        return first
    return dual_cone(Cone.from_coords([u.coords for u in inequalities], other_side(first.side)))


def degree_vector(cone: Cone) -> LatticeVector:
    """
    The integral vector pairing to 1 with every generator.

    Raises
    ------
    NotGorensteinError
        If no integral solution exists.

    Examples
    --------
    >>> str(degree_vector(Cone.from_coords([(1, 0), (1, 2)], "N")))
    '(1,0)'
    """
    rows = [g.coords for g in cone.generators]
    if not rows:
        raise NotGorensteinError("The zero cone has no degree vector.")
    try:
        solution = solve_rational(rows, [1] * len(rows))
    except ValueError as err:
        raise NotGorensteinError(f"{cone} has no vector pairing to 1 with all generators.") from err
    if any(x.denominator != 1 for x in solution):
        values = ",".join(str(x) for x in solution)
        raise NotGorensteinError(f"{cone} is not Gorenstein: degree solution ({values}) is not integral.")
    return LatticeVector(tuple(int(x) for x in solution), other_side(cone.side))


@lru_cache(maxsize=4096)
def points_at_height(cone: Cone, height: Coords, value: int) -> Tuple[Coords, ...]:
    """
    Lattice points ``v`` of ``cone`` with ``height . v == value``, sorted.

    Raises
    ------
    FinitenessError
        If ``height`` is not positive on every generator.
    """
    if value < 0:
        return ()
    if not cone.generators:
        return ((0,) * cone.rank,) if value == 0 else ()
    scales = [dot(height, g.coords) for g in cone.generators]
    if any(s <= 0 for s in scales):
        raise FinitenessError(f"Height {height} is not positive on all generators of {cone}; the slice is unbounded.")
    if value == 0:
        return ((0,) * cone.rank,)
    lows, highs = [], []
    for axis in range(cone.rank):
        ends = [Fraction(value * g.coords[axis], s) for g, s in zip(cone.generators, scales)]
        lows.append(math.floor(min(ends)))
        highs.append(math.ceil(max(ends)))
    grid = np.array(
        list(itertools.product(*[range(lo, hi + 1) for lo, hi in zip(lows, highs)])), dtype=np.int64
    ).reshape(-1, cone.rank)
    mask = grid @ np.array(height, dtype=np.int64) == value
    for u in cone.facet_normals:
        mask &= grid @ np.array(u.coords, dtype=np.int64) >= 0
    for e in cone.equations:
        mask &= grid @ np.array(e.coords, dtype=np.int64) == 0
    return tuple(sorted(tuple(int(c) for c in row) for row in grid[mask]))


def box_elements(cone: Cone) -> Tuple[LatticeVector, ...]:
    """
    Box elements of a simplicial Gorenstein cone.

    Parameters
    ----------
    cone : Cone
        Simplicial cone with a degree vector.

    Returns
    -------
    Tuple[LatticeVector, ...]
        All ``n`` in the cone with ``n - n_i`` outside the cone for every
        generator ``n_i``, sorted by height then coordinates.

    Raises
    ------
    CapabilityError
        If the cone is not simplicial.
    ConfigurationError
        If the cone has no degree vector.
    """
    if not cone.is_simplicial():
        raise CapabilityError(f"box_elements needs a simplicial cone, {cone} is not.")
    if cone.degree is None:
        raise ConfigurationError(f"box_elements needs a degree vector on {cone}.")
    elements = []
    for height in range(len(cone.generators)):
        for point in points_at_height(cone, cone.degree.coords, height):
            shifted = [tuple(p - c for p, c in zip(point, g.coords)) for g in cone.generators]
            if not any(contains_coords(cone, s) for s in shifted):
                elements.append(LatticeVector(point, cone.side))
    return tuple(elements)


def lattice_index(cone: Cone) -> int:
    """Index of the sublattice spanned by the generators of a full simplicial cone."""
    return abs(int(sympy.Matrix([list(g.coords) for g in cone.generators]).det()))
