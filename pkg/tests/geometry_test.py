from fractions import Fraction
from typing import List, Tuple

import pytest

from toricvoa.geometry import (
    Cone,
    Fan,
    LatticePolytope,
    box_elements,
    common_cone_coords,
    cone_contains,
    degree_vector,
    dual_cone,
    extremal_rays,
    lattice_index,
    m_vector,
    n_vector,
    pairing,
    points_at_height,
    polar_dual,
    validate_fan,
    validate_height_function,
    validate_reflexive,
)
from toricvoa.utils.errors import (
    FanValidationError,
    FinitenessError,
    HeightCertificateError,
    NotGorensteinError,
    NotReflexiveError,
    SideMismatchError,
)

from .problem_test_data import a1_cone, p1_lifted_fan, plane_cone, two_points_data

box_table = [
    pytest.param(Cone.from_coords([(1,)], "N", (1,)), [(0,)], 1, id="line"),
    pytest.param(plane_cone(), [(0, 0)], 1, id="plane"),
    pytest.param(a1_cone(), [(0, 0), (1, 1)], 2, id="a1"),
]


def test_pairing_rejects_same_side() -> None:
    assert pairing(m_vector(1, 2), n_vector(3, -1)) == 1
    with pytest.raises(SideMismatchError):
        pairing(m_vector(1, 0), m_vector(0, 1))


def test_dual_of_a1_cone() -> None:
    dual = dual_cone(a1_cone())
    assert dual.side == "M"
    assert [g.coords for g in dual.generators] == [(0, 1), (2, -1)]
    assert [g.coords for g in dual_cone(dual).generators] == [(1, 0), (1, 2)]


def test_cone_contains() -> None:
    cone = a1_cone()
    assert cone_contains(cone, n_vector(1, 1))
    assert not cone_contains(cone, n_vector(0, 1))
    with pytest.raises(SideMismatchError):
        cone_contains(cone, m_vector(1, 1))


def test_degree_vector() -> None:
    assert degree_vector(a1_cone()).coords == (1, 0)
    with pytest.raises(NotGorensteinError):
        degree_vector(Cone.from_coords([(2, 1), (1, 2)], "N"))


def test_points_at_height() -> None:
    assert points_at_height(a1_cone(), (1, 0), 1) == ((1, 0), (1, 1), (1, 2))
    assert points_at_height(a1_cone(), (1, 0), 0) == ((0, 0),)
    with pytest.raises(FinitenessError):
        points_at_height(a1_cone(), (0, 1), 1)


@pytest.mark.parametrize("cone,expected,index", box_table)
def test_box_elements(cone: Cone, expected: List[Tuple[int, ...]], index: int) -> None:
    assert [b.coords for b in box_elements(cone)] == expected
    assert lattice_index(cone) == index


def test_fan_from_maximal_cones_adds_faces() -> None:
    fan = p1_lifted_fan()
    assert len(fan.cones) == 6
    assert len(fan.maximal_cones) == 2
    assert [r.coords for r in fan.rays] == [(-1, 1), (0, 1), (1, 1)]
    validate_fan(fan)
    assert common_cone_coords(fan, (0, 1), (1, 1))
    assert not common_cone_coords(fan, (-1, 1), (1, 1))


def test_fan_missing_face() -> None:
    cones = (Cone.from_coords([(-1, 1), (0, 1)], "N"), Cone.from_coords([(0, 1), (1, 1)], "N"))
    with pytest.raises(FanValidationError):
        validate_fan(Fan(cones))


def test_overlapping_cones_are_not_a_fan() -> None:
    fan = Fan.from_maximal_cones([Cone.from_coords([(1, 0), (0, 1)], "N"), Cone.from_coords([(1, 0), (1, 1)], "N")])
    with pytest.raises(FanValidationError):
        validate_fan(fan)


def test_height_function_certificate() -> None:
    fan = p1_lifted_fan()
    heights = {n_vector(-1, 1): Fraction(1), n_vector(0, 1): Fraction(0), n_vector(1, 1): Fraction(1)}
    certificate = validate_height_function(fan, heights)
    assert certificate.checked_pairs == 2
    flat = {r: Fraction(0) for r in fan.rays}
    with pytest.raises(HeightCertificateError) as err:
        validate_height_function(fan, flat)
    assert err.value.pair is not None


def test_polar_dual_of_segment() -> None:
    segment = LatticePolytope.from_coords([[-1], [1]], "M")
    assert sorted(v.coords for v in polar_dual(segment).points) == [(-1,), (1,)]


polar_table = [
    pytest.param([(1, 0), (0, 1), (-1, -1)], [(-1, -1), (-1, 2), (2, -1)], id="p2_triangle"),
    pytest.param([(1, 1), (1, -1), (-1, 1), (-1, -1)], [(-1, 0), (0, -1), (0, 1), (1, 0)], id="square"),
    pytest.param(
        [(x, y) for x in (-1, 0, 1) for y in (-1, 0, 1)], [(-1, 0), (0, -1), (0, 1), (1, 0)], id="square_all_points"
    ),
]


@pytest.mark.parametrize("points,expected", polar_table)
def test_polar_dual(points: List[Tuple[int, ...]], expected: List[Tuple[int, ...]]) -> None:
    polytope = LatticePolytope.from_coords(points, "M")
    dual = polar_dual(polytope)
    assert sorted(v.coords for v in dual.points) == expected
    assert sorted(v.coords for v in polar_dual(dual).points) == sorted(v.coords for v in polytope.vertices())


def test_extremal_rays() -> None:
    assert extremal_rays([(-1, 1), (0, 1), (1, 1)], 2) == ((-1, 1), (1, 1))
    assert extremal_rays([(1, 0, 1), (0, 0, 1), (0, 1, 1), (1, 1, 1)], 3) == ((1, 0, 1), (0, 1, 1), (1, 1, 1))
    assert extremal_rays([(1, 0), (-1, 0), (0, 1)], 2) == ((1, 0), (-1, 0), (0, 1))


def test_cone_keeps_only_extremal_generators() -> None:
    k_star = two_points_data().cone_k_star()
    assert [g.coords for g in k_star.generators] == [(-1, 1), (1, 1)]
    assert k_star.is_simplicial()
    assert [b.coords for b in box_elements(k_star)] == [(0, 0), (0, 1)]


def test_two_points_are_reflexive() -> None:
    data = two_points_data()
    validate_reflexive(data)
    mirror = data.mirror()
    assert mirror.f == data.g
    assert mirror.deg.coords == data.deg_star.coords
    validate_reflexive(mirror)


def test_non_reflexive_segment() -> None:
    data = two_points_data()
    wide = type(data)(
        tuple((m_vector(*p), Fraction(1)) for p in [(-1, 1), (0, 1), (2, 1)]),
        data.delta_star_points,
        data.deg,
        data.deg_star,
    )
    with pytest.raises(NotReflexiveError):
        validate_reflexive(wide)
