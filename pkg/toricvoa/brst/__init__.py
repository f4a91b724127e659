from .homotopy import (  # noqa
    M0,
    SIMPLE,
    anticommutator,
    apply_homotopy,
    homotopy_operator,
    homotopy_terms,
    m0_homotopy_terms,
    simple_homotopy_terms,
)
from .ideal import IdealSolution, log_derivatives, solve_ideal_membership, standard_basis  # noqa
from .operator import (  # noqa
    CHART_GRADINGS,
    HYPERSURFACE_GRADINGS,
    BrstSpec,
    CachedBrst,
    NilpotencyCheck,
    apply_brst,
    apply_terms,
    brst_f_terms,
    brst_g_terms,
    build_brst,
    chart_brst,
    check_nilpotent,
    conservation_violations,
    grading_value,
    hypersurface_brst,
    m_height,
    n_height,
    support_shift_violations,
)
