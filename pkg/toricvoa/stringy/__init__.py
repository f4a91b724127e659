from .forms import (  # noqa
    StringComplexSlice,
    StringForm,
    box_sector,
    build_string_complex,
    contract,
    forms_at,
    j_bigrading,
    sector_cohomology,
    wedge,
)
from .hyper import StringCohomology, restriction, string_hypercohomology  # noqa
