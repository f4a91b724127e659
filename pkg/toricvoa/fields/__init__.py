from .composite import CompositeFieldTerm, residue_mode  # noqa
from .mirror import mirror_mode, mirror_state, mirror_term, mirror_vector  # noqa
from .operator import BlockOperator, assemble_operator, coordinates_to_vector, vector_to_coordinates  # noqa
from .quadratic import FIELD_NAMES, apply_field_mode, field_terms, quadratic_field_mode  # noqa
from .vertex import SeriesSlice, VertexOpSpec, creation_polynomial, vertex_op_series  # noqa
