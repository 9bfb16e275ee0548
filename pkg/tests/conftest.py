"""
Pytest configuration and shared fixtures.
"""

import pytest

from app.graph_core import Graph, boutin_gap_graph, standard_graph
from app.models import GraphKind
from app.monitoring import monitor
from app.ring_core import make_ring
from app.zdg_build import zero_divisor_graph


@pytest.fixture
def small_graph_corpus():
    """Named small graphs with their known (Det, dim_M)."""
    return {
        "K1": (standard_graph(GraphKind.COMPLETE, 1), 0, 0),
        "K4": (standard_graph(GraphKind.COMPLETE, 4), 3, 3),
        "P5": (standard_graph(GraphKind.PATH, 5), 1, 1),
        "C6": (standard_graph(GraphKind.CYCLE, 6), 2, 2),
        "E3": (standard_graph(GraphKind.EMPTY, 3), 2, 2),
        "star": (Graph(5, [(0, i) for i in range(1, 5)]), 3, 3),
        "gap1": (boutin_gap_graph(1), 1, 2),
    }


@pytest.fixture
def ring_factory():
    """Build rings from spec strings, cached per test."""
    cache = {}

    def build(spec: str):
        if spec not in cache:
            cache[spec] = make_ring(spec)
        return cache[spec]

    return build


@pytest.fixture
def zn_graph(ring_factory):
    """Γ(Z_n) for a given n."""
    def build(n: int):
        return zero_divisor_graph(ring_factory(f"zn:{n}"))

    return build


@pytest.fixture
def tmp_export_dir(tmp_path):
    """Directory for export files."""
    target = tmp_path / "exports"
    target.mkdir()
    return target


@pytest.fixture(autouse=True)
def fresh_monitor():
    """Every test starts with empty suite counters."""
    monitor.reset_metrics()
    yield monitor


# Pytest configuration
def pytest_configure(config):
    """Configure pytest."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
    config.addinivalue_line(
        "markers", "unit: marks tests as unit tests"
    )
