from typing import List

import pytest
from _pytest import nodes
from _pytest.config import Config
from _pytest.config.argparsing import Parser


def pytest_addoption(parser: Parser) -> None:
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="Run the slow computations (elliptic curve, full stabilization schedules).",
    )


def pytest_configure(config: Config) -> None:
    config.addinivalue_line("markers", "slow: Mark a computation that takes minutes.")


def pytest_collection_modifyitems(config: Config, items: List[nodes.Item]) -> None:
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="need --runslow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
