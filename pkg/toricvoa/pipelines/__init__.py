from .chart import CechGrid, bundle_cohomology, chart_cohomology, chart_window_dim, ray_coefficients  # noqa
from .hypersurface import genericity_certificates, hypersurface_cohomology, master_family_cohomology  # noqa
from .problem import PIPELINES, RANDOM, ProblemInstance, RunOptions, WindowConfig, random_coefficients  # noqa
from .report import (  # noqa
    EXACT,
    NOT_STABILIZED,
    STABILIZED,
    CohomologyReport,
    ReportEntry,
    character,
    format_entry,
    format_report,
    mirror_report,
)
from .runner import list_blocks, mirror_check, run_pipeline, stringy_report  # noqa
