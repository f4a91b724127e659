import dataclasses
import itertools
import logging
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from toricvoa.utils.errors import FanValidationError, HeightCertificateError, SideMismatchError

from .cone import Cone, contains_coords, intersect_cones
from .lattice import Coords, LatticeVector, dot, solve_rational

logger = logging.getLogger(__name__)


def cone_faces(cone: Cone) -> List[Tuple[LatticeVector, ...]]:
    """
    Generator sets of all faces of ``cone``, the zero face included.
    """
    faces = {(): True, tuple(cone.generators): True}
    normals = cone.facet_normals
    for count in range(1, len(normals) + 1):
        for chosen in itertools.combinations(normals, count):
            face = tuple(g for g in cone.generators if all(dot(u.coords, g.coords) == 0 for u in chosen))
            faces[face] = True
    return sorted(faces, key=lambda f: (len(f), f))


def is_face(cone: Cone, generators: Sequence[LatticeVector]) -> bool:
    return tuple(sorted(generators)) in cone_faces(cone)


@dataclasses.dataclass(frozen=True)
class Fan:
    """
    Collection of cones closed under faces and intersections.

    Parameters
    ----------
    cones : Tuple[Cone, ...]
        Every cone of the fan, faces included.
    heights : Optional[Tuple[Tuple[LatticeVector, Fraction], ...]]
        Optional height function on the generators.

    Attributes
    ----------
    adjacency : Dict[int, Tuple[int, ...]]
        For each cone index, the indices of its faces among ``cones``.
    """

    cones: Tuple[Cone, ...]
    heights: Optional[Tuple[Tuple[LatticeVector, Fraction], ...]] = None

    def __post_init__(self) -> None:
        sides = {c.side for c in self.cones}
        if len(sides) > 1:
            raise SideMismatchError("All cones of a fan must live on the same side.")

    @classmethod
    def from_maximal_cones(cls, maximal: Sequence[Cone]) -> "Fan":
        """Fan generated by ``maximal`` together with all of their faces."""
        cones: List[Cone] = []
        seen = set()
        for cone in maximal:
            for face in cone_faces(cone):
                if face in seen:
                    continue
                seen.add(face)
                cones.append(cone if face == cone.generators else Cone(face, cone.side, cone.rank))
        cones.sort(key=lambda c: (len(c.generators), c.generators))
        return cls(tuple(cones))

    @property
    def side(self) -> str:
        return self.cones[0].side

    @property
    def rank(self) -> int:
        return self.cones[0].rank

    @cached_property
    def maximal_cones(self) -> Tuple[Cone, ...]:
        result = []
        for cone in self.cones:
            others = [c for c in self.cones if c is not cone and len(c.generators) > len(cone.generators)]
            if not any(set(cone.generators) <= set(c.generators) for c in others):
                result.append(cone)
        return tuple(result)

    @cached_property
    def rays(self) -> Tuple[LatticeVector, ...]:
        return tuple(sorted({g for c in self.cones for g in c.generators}))

    @property
    def adjacency(self) -> Dict[int, Tuple[int, ...]]:
        index = {c.generators: i for i, c in enumerate(self.cones)}
        table = {}
        for i, cone in enumerate(self.cones):
            table[i] = tuple(sorted(index[f] for f in cone_faces(cone) if f in index and f != cone.generators))
        return table

    def cone_of(self, generators: Sequence[LatticeVector]) -> Optional[Cone]:
        key = tuple(sorted(generators))
        for c in self.cones:
            if c.generators == key:
                return c
        return None

    def height_map(self) -> Dict[LatticeVector, Fraction]:
        return dict(self.heights or ())

    def relabeled(self, order: Sequence[int]) -> "Fan":
        return Fan(tuple(self.cones[i] for i in order), self.heights)


def validate_fan(fan: Fan) -> None:
    """
    Check closure under faces and that pairwise intersections are common faces.

    Raises
    ------
    FanValidationError
        Naming the first missing face or bad intersection.
    """
    listed = {c.generators for c in fan.cones}
    for cone in fan.cones:
        for face in cone_faces(cone):
            if face and face not in listed:
                names = ",".join(str(g) for g in face)
                raise FanValidationError(f"Face cone({names}) of {cone} is missing from the fan.")
    for first, second in itertools.combinations(fan.maximal_cones, 2):
        meet = intersect_cones(first, second)
        common = tuple(sorted(set(first.generators) & set(second.generators)))
        if tuple(sorted(meet.generators)) != common or not is_face(first, common) or not is_face(second, common):
            raise FanValidationError(f"{first} and {second} do not intersect in a common face.")
    logger.debug("validated fan with %d cones", len(fan.cones))


def common_cone(fan: Fan, first: LatticeVector, second: LatticeVector) -> bool:
    """
    True iff some cone of ``fan`` contains both vectors.

    Examples
    --------
    >>> cones = [Cone.from_coords([(1, 1), (0, 1)], "N"), Cone.from_coords([(-1, 1), (0, 1)], "N")]
    >>> fan = Fan.from_maximal_cones(cones)
    >>> common_cone(fan, n_vector(1, 1), n_vector(-1, 1))
    False
    """
    if first.side != fan.side or second.side != fan.side:
        raise SideMismatchError(f"common_cone expects vectors on side {fan.side}.")
    return common_cone_coords(fan, first.coords, second.coords)


def common_cone_coords(fan: Fan, first: Coords, second: Coords) -> bool:
    for cone in fan.maximal_cones:
        if contains_coords(cone, first) and contains_coords(cone, second):
            return True
    return False


def in_support(fan: Fan, coords: Coords) -> bool:
    return any(contains_coords(c, coords) for c in fan.maximal_cones)


@dataclasses.dataclass(frozen=True)
class HeightCertificate:
    """
    Linear forms certifying that a height function is strictly convex.

    Attributes
    ----------
    linear_forms : Tuple[Tuple[Cone, Tuple[Fraction, ...]], ...]
        The linear form agreeing with the heights on each maximal cone.
    checked_pairs : int
        Number of (cone, outside generator) strictness checks performed.
    """

    linear_forms: Tuple[Tuple[Cone, Tuple[Fraction, ...]], ...]
    checked_pairs: int


def validate_height_function(fan: Fan, heights: Mapping[LatticeVector, Fraction]) -> HeightCertificate:
    """
    Certify that ``heights`` is linear on every cone and strictly convex across cones.

    On each maximal cone a linear form matching the heights is solved for
    exactly; every generator outside that cone must lie strictly above it.

    Raises
    ------
    HeightCertificateError
        With the violating (cone, generator) pair.
    """
    missing = [r for r in fan.rays if r not in heights]
    if missing:
        raise HeightCertificateError(f"Height function is undefined on {missing[0]}.", (missing[0],))
    forms = []
    checked = 0
    for cone in fan.maximal_cones:
        rows = [g.coords for g in cone.generators]
        values = [Fraction(heights[g]) for g in cone.generators]
        common = 1
        for v in values:
            common = common * v.denominator
        try:
            form = solve_rational(rows, [int(v * common) for v in values])
        except ValueError as err:
            raise HeightCertificateError(f"Heights are not linear on {cone}.", (cone,)) from err
        form = tuple(x / common for x in form)
        for g, v in zip(cone.generators, values):
            if sum(a * b for a, b in zip(form, g.coords)) != v:
                raise HeightCertificateError(f"Heights are not linear on {cone}.", (cone, g))
        for ray in fan.rays:
            if ray in cone.generators:
                continue
            checked += 1
            if sum(a * b for a, b in zip(form, ray.coords)) >= Fraction(heights[ray]):
                raise HeightCertificateError(
                    f"Height function is not strictly convex: {ray} does not lie above the form of {cone}.",
                    (cone, ray),
                )
        forms.append((cone, form))
    return HeightCertificate(tuple(forms), checked)
