from fractions import Fraction
from typing import Dict, Sequence

from toricvoa.geometry.cone import Cone
from toricvoa.geometry.fan import Fan
from toricvoa.geometry.lattice import M, N, Coords, LatticeVector
from toricvoa.geometry.polytope import PolytopeData

P1_POINTS = ((-1, 1), (0, 1), (1, 1))


def line_cone() -> Cone:
    return Cone.from_coords([(1,)], N, (1,))


def plane_cone() -> Cone:
    return Cone.from_coords([(1, 0), (0, 1)], N, (1, 1))


def a1_cone() -> Cone:
    return Cone.from_coords([(1, 0), (1, 2)], N, (1, 0))


def unit_coefficients(cone: Cone) -> Dict[Coords, Fraction]:
    return {g.coords: Fraction(1) for g in cone.generators}


def two_points_data(f: Sequence[int] = (1, 1, 1), g: Sequence[int] = (1, 1, 1)) -> PolytopeData:
    """Two points in P^1: Delta and Delta* both the segment at height one."""
    return PolytopeData(
        tuple((LatticeVector(p, M), Fraction(c)) for p, c in zip(P1_POINTS, f)),
        tuple((LatticeVector(p, N), Fraction(c)) for p, c in zip(P1_POINTS, g)),
        LatticeVector((0, 1), M),
        LatticeVector((0, 1), N),
    )


def p1_lifted_fan() -> Fan:
    return Fan.from_maximal_cones(
        [Cone.from_coords([(-1, 1), (0, 1)], N), Cone.from_coords([(0, 1), (1, 1)], N)]
    )


def p1_fan() -> Fan:
    return Fan.from_maximal_cones([Cone.from_coords([(1,)], N), Cone.from_coords([(-1,)], N)])


NON_REFLEXIVE = """{
  "name": "non_reflexive",
  "lattice": {"rank": 2},
  "delta": [
    {"point": [-1, 1], "f": 1},
    {"point": [0, 1], "f": 1},
    {"point": [2, 1], "f": 1}
  ],
  "delta_star": [
    {"point": [-1, 1], "g": 1},
    {"point": [0, 1], "g": 1},
    {"point": [1, 1], "g": 1}
  ],
  "deg": [0, 1],
  "deg_star": [0, 1]
}
"""

MISSING_FACE = """{
  "name": "missing_face",
  "lattice": {"rank": 2},
  "fan": [
    [[-1, 1], [0, 1]],
    [[0, 1], [1, 1]]
  ],
  "pipeline": "stringy"
}
"""

UNKNOWN_KEYS = """{
  "name": "unknown_keys",
  "lattice": {"rank": 2},
  "cone": [[1, 0], [1, 2]],
  "pipeline": "chart",
  "colour": "blue",
  "window": {"l_max": 1, "speed": 3}
}
"""

FLOAT_COEFFICIENT = """{
  "name": "float_coefficient",
  "lattice": {"rank": 2},
  "delta": [
    {"point": [-1, 1], "f": 0.5},
    {"point": [0, 1], "f": 1},
    {"point": [1, 1], "f": 1}
  ],
  "delta_star": [
    {"point": [-1, 1], "g": 1},
    {"point": [0, 1], "g": 1},
    {"point": [1, 1], "g": 1}
  ],
  "deg": [0, 1],
  "deg_star": [0, 1]
}
"""

RANDOM_COEFFICIENTS = """{
  "name": "random_coefficients",
  "lattice": {"rank": 2},
  "delta": [
    {"point": [-1, 1], "f": "random"},
    {"point": [0, 1], "f": [1, 2]},
    {"point": [1, 1], "f": "random"}
  ],
  "delta_star": [
    {"point": [-1, 1], "g": 1},
    {"point": [0, 1], "g": 1},
    {"point": [1, 1], "g": 1}
  ],
  "deg": [0, 1],
  "deg_star": [0, 1],
  "seed": 3
}
"""
