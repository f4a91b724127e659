from .cone import (  # noqa
    Cone,
    box_elements,
    cone_contains,
    contains_coords,
    degree_vector,
    dual_cone,
    extremal_rays,
    intersect_cones,
    lattice_index,
    points_at_height,
)
from .fan import (  # noqa
    Fan,
    HeightCertificate,
    common_cone,
    common_cone_coords,
    cone_faces,
    in_support,
    validate_fan,
    validate_height_function,
)
from .lattice import M, N, LatticeVector, dot, m_vector, n_vector, pairing  # noqa
from .polytope import LatticePolytope, PolytopeData, cone_over_polytope, polar_dual, validate_reflexive  # noqa
