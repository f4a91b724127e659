from .cache import ResultCache, cache_key  # noqa
from .problem import bundled_problems, parse, parse_problem  # noqa
from .verify import SUITES, SuiteOptions, SuiteResult, run_suite  # noqa
