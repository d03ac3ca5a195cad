"""
Pytest configuration and fixtures for the circle-graph / isotropic-matroid tests.
"""

import os
import sys

import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from config import config
from telemetry.run_summary import run_summary


# The worked example: a 4-regular graph with one Euler circuit
EXAMPLE_WORD = "abcdbacd"


@pytest.fixture
def example_system():
    """(FourRegular, EulerSystem) of the worked example."""
    from fourreg import parse_dow

    return parse_dow([EXAMPLE_WORD])


@pytest.fixture
def example_signed():
    """Signed IAS of the worked example, based at edge ad."""
    from signedias import signed_ias_from_words

    return signed_ias_from_words([EXAMPLE_WORD], base=["ad"])


@pytest.fixture
def example_graph(example_system):
    """Interlacement graph of the worked example."""
    from fourreg import interlacement

    return interlacement(example_system[1])


@pytest.fixture
def small_graph_files(tmp_path):
    """Graph files for the command line: C5 (circle) and W5 (not circle)."""
    from formats import write_graph
    from graph import named_graph

    paths = {}
    for name in ("C5", "W5"):
        path = tmp_path / f"{name.lower()}.graph"
        write_graph(named_graph(name), path)
        paths[name] = path
    return paths


@pytest.fixture
def mock_config():
    """Bounds small enough for fast tests, large enough for every n <= 7 check."""
    class MockConfig:
        LOGS_DIR = "logs"
        LOG_LEVEL = "WARNING"
        ENABLE_LOGFIRE = False
        SEND_TO_LOGFIRE = False
        DEFAULT_FIELD = "gf3"
        ORBIT_BUDGET = 20000
        VERTEX_MINOR_BUDGET = 200000
        GRAPH_VERTEX_BOUND = 10
        ISOMORPHISM_VERTEX_BOUND = 12
        TRANSVERSAL_SWEEP_BOUND = 10
        SHELTER_VERTEX_BOUND = 8
        REALIZE_VERTEX_BOUND = 6
        THREE_CIRCUIT_BOUND = 8

    return MockConfig()


@pytest.fixture(autouse=True)
def setup_test_environment(monkeypatch, mock_config):
    """Automatically set up test environment for all tests."""
    for attr in dir(mock_config):
        if not attr.startswith('_'):
            monkeypatch.setattr(type(config), attr, getattr(mock_config, attr))
    run_summary.reset()
    yield
    run_summary.reset()
