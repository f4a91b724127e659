from .enumerate import (  # noqa
    Block,
    ConeRegion,
    bosonic_monomials,
    chart_block,
    chart_box_block,
    chart_height_bound,
    dual_cone_block,
    enumerate_block,
    fermionic_monomials,
    fermionic_monomials_with_number,
    fixed_charge_block,
    format_block,
    min_fermion_weight,
    oscillator_monomials,
)
from .grading import (  # noqa
    J0,
    L0,
    LXA0,
    LXB0,
    GradingConfig,
    cohomological_degree,
    fermion_counts,
    fermion_number,
    oscillator_weight,
)
from .orbifold import a0_bound, box_coefficients, flat_count, orbifold_mode_table, orbifold_prediction  # noqa
from .state import (  # noqa
    A,
    B,
    PHI,
    PSI,
    FockState,
    ModeKey,
    StateVector,
    apply_free_mode,
    apply_mode,
    mode_order,
    normal_form,
    vacuum,
)
