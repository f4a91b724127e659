from .cohomology import (  # noqa
    CohomologySpace,
    charge_graded_cohomology,
    cohomology_dim,
    cohomology_of_sequence,
    induced_map,
)
from .double import DoubleComplex, cech_total_cohomology  # noqa
from .sparse import EchelonBasis, SparseMatrix, kernel_basis, rank, solve  # noqa
from .stabilize import NOT_STABILIZED, STABILIZED, StabilizationReport, stabilize  # noqa
