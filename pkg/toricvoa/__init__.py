from .cli import parse  # noqa
from .pipelines import run_pipeline  # noqa
