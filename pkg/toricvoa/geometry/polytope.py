import dataclasses
import logging
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from toricvoa.utils.errors import InputError, NotGorensteinError, NotReflexiveError, SideMismatchError

from .cone import Cone, dual_cone
from .lattice import M, N, Coords, LatticeVector, dot, other_side

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class LatticePolytope:
    """
    Lattice polytope given by its points (vertices or more).

    Parameters
    ----------
    points : Tuple[LatticeVector, ...]
        Lattice points whose convex hull is the polytope.
    """

    points: Tuple[LatticeVector, ...]

    @property
    def side(self) -> str:
        return self.points[0].side

    @property
    def rank(self) -> int:
        return self.points[0].rank

    @classmethod
    def from_coords(cls, points: Sequence[Sequence[int]], side: str) -> "LatticePolytope":
        return cls(tuple(LatticeVector(tuple(p), side) for p in points))

    def vertices(self) -> Tuple[LatticeVector, ...]:
        """Points spanning rays of the cone over the polytope."""
        cone = cone_over_polytope(self)
        return tuple(LatticeVector(g.coords[:-1], self.side) for g in cone.generators)


def cone_over_polytope(polytope: LatticePolytope) -> Cone:
    """
    Cone over ``polytope x {1}`` with degree vector ``(0, ..., 0, 1)``.

    Examples
    --------
    >>> str(cone_over_polytope(LatticePolytope.from_coords([[-1], [0], [1]], "M")))
    'cone((-1,1),(1,1))'
    """
    lifted = [p.coords + (1,) for p in polytope.points]
    degree = (0,) * polytope.rank + (1,)
    return Cone.from_coords(lifted, polytope.side, degree)


def polar_dual(polytope: LatticePolytope) -> LatticePolytope:
    """
    Polar dual ``{n : m . n >= -1 for all m in polytope}``.

    Raises
    ------
    InputError
        If the origin is not an interior point.
    NotReflexiveError
        If a vertex of the dual is not integral.
    """
    cone = cone_over_polytope(polytope)
    if cone.equations:
        raise InputError("polar_dual needs a full-dimensional polytope.")
    vertices = []
    for normal in cone.facet_normals:
        u, c = normal.coords[:-1], normal.coords[-1]
        if c <= 0:
            raise InputError("polar_dual needs the origin in the interior of the polytope.")
        if any(x % c for x in u):
            values = ",".join(str(Fraction(x, c)) for x in u)
            raise NotReflexiveError(f"Polar dual vertex ({values}) is not integral.")
        vertices.append(tuple(x // c for x in u))
    return LatticePolytope.from_coords(sorted(vertices), other_side(polytope.side))


@dataclasses.dataclass(frozen=True)
class PolytopeData:
    """
    Dual reflexive Gorenstein data with coefficients.

    Parameters
    ----------
    delta_points : Tuple[Tuple[LatticeVector, Fraction], ...]
        Points ``m`` of Delta (``deg_star . m = 1``) with coefficients ``f_m``.
    delta_star_points : Tuple[Tuple[LatticeVector, Fraction], ...]
        Points ``n`` of Delta* (``deg . n = 1``) with coefficients ``g_n``.
    deg : LatticeVector
        Degree vector in M.
    deg_star : LatticeVector
        Degree vector in N.
    """

    delta_points: Tuple[Tuple[LatticeVector, Fraction], ...]
    delta_star_points: Tuple[Tuple[LatticeVector, Fraction], ...]
    deg: LatticeVector
    deg_star: LatticeVector

    def __post_init__(self) -> None:
        if self.deg.side != M or self.deg_star.side != N:
            raise SideMismatchError("deg must lie in M and deg_star in N.")
        for m, _ in self.delta_points:
            if m.side != M or dot(m.coords, self.deg_star.coords) != 1:
                raise InputError(f"Delta point {m} must lie in M with deg_star . m = 1.")
        for n, _ in self.delta_star_points:
            if n.side != N or dot(self.deg.coords, n.coords) != 1:
                raise InputError(f"Delta* point {n} must lie in N with deg . n = 1.")

    @property
    def rank(self) -> int:
        return self.deg.rank

    @property
    def f(self) -> Dict[Coords, Fraction]:
        return {m.coords: Fraction(c) for m, c in self.delta_points}

    @property
    def g(self) -> Dict[Coords, Fraction]:
        return {n.coords: Fraction(c) for n, c in self.delta_star_points}

    def cone_k(self) -> Cone:
        """The cone K over Delta, with degree vector deg_star."""
        return Cone.from_coords([m.coords for m, _ in self.delta_points], M, self.deg_star.coords)

    def cone_k_star(self) -> Cone:
        """The cone K* over Delta*, with degree vector deg."""
        return Cone.from_coords([n.coords for n, _ in self.delta_star_points], N, self.deg.coords)

    def mirror(self) -> "PolytopeData":
        """Exchange (M, Delta, f, deg) with (N, Delta*, g, deg_star)."""
        return PolytopeData(
            tuple((n.dual(), c) for n, c in self.delta_star_points),
            tuple((m.dual(), c) for m, c in self.delta_points),
            self.deg_star.dual(),
            self.deg.dual(),
        )

    def with_coefficients(self, f: Dict[Coords, Fraction], g: Dict[Coords, Fraction]) -> "PolytopeData":
        return PolytopeData(
            tuple((m, Fraction(f.get(m.coords, 0))) for m, _ in self.delta_points),
            tuple((n, Fraction(g.get(n.coords, 0))) for n, _ in self.delta_star_points),
            self.deg,
            self.deg_star,
        )


def validate_reflexive(data: PolytopeData) -> None:
    """
    Check that K and K* are dual Gorenstein cones with the given degrees.

    Raises
    ------
    NotReflexiveError
        If a ray of the dual of K is not at height one or K* is not that dual.
    """
    k = data.cone_k()
    dual = dual_cone(k)
    for ray in dual.generators:
        height = dot(data.deg.coords, ray.coords)
        if height != 1:
            raise NotReflexiveError(f"Ray {ray} of the dual of K has height {height}; the polytope is not reflexive.")
    k_star = data.cone_k_star()
    if set(k_star.generators) != set(dual.generators):
        raise NotReflexiveError("The cone over Delta* is not the dual of the cone over Delta.")
    if k.degree is None or k_star.degree is None:
        raise NotGorensteinError("Degree vectors are missing.")
    logger.debug("reflexive pair validated: %d rays in K, %d rays in K*", len(k.generators), len(k_star.generators))
