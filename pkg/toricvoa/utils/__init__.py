from .canonical import CONVENTION_VERSION, canonical_json, content_hash  # noqa
from .errors import (  # noqa
    BlockClosureError,
    CapabilityError,
    ConfigurationError,
    FanValidationError,
    FinitenessError,
    GenericityFailure,
    HeightCertificateError,
    InputError,
    MathematicalFailure,
    NilpotencyError,
    NotGorensteinError,
    NotReflexiveError,
    NotStabilizedError,
    PipelineDisagreement,
    ProblemFileError,
    SideMismatchError,
    ToricVOAError,
    ValidationIssue,
)
from .log import configure_logging  # noqa
