import pytest
from loguru import logger

from prymtools.graphs.core import Edge, Graph
from prymtools.graphs.cover import FreeDoubleCover, build_cover
from prymtools.selftest.fixtures import load_fixture


@pytest.fixture(autouse=True)
def isolated_logs(monkeypatch, tmp_path):
    monkeypatch.setenv("PRYM_LOG_DIR", str(tmp_path / "logs"))
    yield
    logger.remove()


@pytest.fixture
def doublecover1() -> FreeDoubleCover:
    return load_fixture("doublecover1")


@pytest.fixture
def example_big() -> FreeDoubleCover:
    return load_fixture("example_big")


@pytest.fixture
def irregular() -> FreeDoubleCover:
    return load_fixture("irregular")


def bouquet(loops: int) -> Graph:
    return Graph((1,), tuple(Edge(i, 1, 1) for i in range(1, loops + 1)))


@pytest.fixture
def flipped_bouquet() -> FreeDoubleCover:
    """Three flipped loops: total graph is two vertices joined by six edges."""
    return build_cover(bouquet(3), [], [1, 2, 3])


def cycle_graph(n: int) -> Graph:
    return Graph(tuple(range(1, n + 1)), tuple(Edge(i, i, i % n + 1) for i in range(1, n + 1)))


def complete_graph(n: int) -> Graph:
    pairs = [(u, w) for u in range(1, n + 1) for w in range(u + 1, n + 1)]
    return Graph(tuple(range(1, n + 1)), tuple(Edge(i, u, w) for i, (u, w) in enumerate(pairs, start=1)))
