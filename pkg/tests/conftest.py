"""Shared pytest configuration."""

import sys
from pathlib import Path

import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run the slow acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: exhaustive or 1000-sample acceptance runs")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def write_graph(tmp_path):
    """Write an edge-list file and return its path."""

    def _write(text: str, name: str = "graph.edges") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write
