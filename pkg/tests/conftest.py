"""
Pytest configuration and shared fixtures.
"""

import math
import os
import tempfile
from itertools import combinations

import numpy as np
import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from app.database import Base
from app.mccs.graph import Assignment, Graph, build_grid, build_sparse, connected_components
from app.models import SolveRun

PATH5_WEIGHTS = [-1.0, 0.4, -1.0, 0.7, -2.0]

PATH5_SPARSE = """\
n 5
w 0 -1.0
w 1 0.4
w 2 -1.0
w 3 0.7
w 4 -2.0
e 0 1
e 1 2
e 2 3
e 3 4
"""


def connected_sets_containing(graph: Graph, root: int):
    """Every connected node set containing ``root``, each exactly once."""
    def grow(members, excluded):
        candidates = [u for u in graph.boundary(members) if u not in excluded]
        if not candidates:
            yield members
            return
        v = candidates[0]
        yield from grow(members | {v}, excluded)
        yield from grow(members, excluded | {v})

    yield from grow(frozenset([root]), frozenset())


def brute_force_optimum(graph: Graph, weights, root=None):
    """
    Minimum objective over connected labelings containing ``root``; without
    a root the empty labeling competes as well.
    """
    roots = [root] if root is not None else range(graph.n_nodes)
    best_value, best_nodes = (0.0, ()) if root is None else (None, None)
    for r in roots:
        for members in connected_sets_containing(graph, r):
            value = math.fsum(weights[i] for i in members)
            if best_value is None or value < best_value - 1e-12:
                best_value, best_nodes = value, tuple(sorted(members))
    return best_value, best_nodes


def connected_set_matrix(graph: Graph) -> np.ndarray:
    """Boolean matrix with one row per nonempty connected node set of ``graph``."""
    rows = []
    for r in range(graph.n_nodes):
        def grow(members, excluded):
            candidates = [u for u in graph.boundary(members) if u not in excluded]
            if not candidates:
                rows.append(sorted(members))
                return
            v = candidates[0]
            grow(members | {v}, excluded)
            grow(members, excluded | {v})

        grow(frozenset([r]), frozenset(range(r)))
    matrix = np.zeros((len(rows), graph.n_nodes), dtype=bool)
    for index, members in enumerate(rows):
        matrix[index, members] = True
    return matrix


def oracle_objective(matrix: np.ndarray, weights, root: int) -> float:
    """Rooted optimum from a precomputed :func:`connected_set_matrix`."""
    sets = matrix[matrix[:, root]]
    return float((sets @ np.asarray(weights, dtype=np.float64)).min())


def brute_force_separator_size(graph: Graph, labels, source, sink, max_size=3):
    """Smallest number of inactive nodes whose removal disconnects ``source`` from ``sink``."""
    inactive = [i for i in range(graph.n_nodes) if not labels[i]]
    for size in range(max_size + 1):
        for removed in combinations(inactive, size):
            blocked = set(removed)
            passable = [0 if i in blocked else 1 for i in range(graph.n_nodes)]
            joined = any(
                set(comp) & set(source) and set(comp) & set(sink)
                for comp in connected_components(graph, passable)
            )
            if not joined:
                return size
    return None


def random_weights(rng: np.random.Generator, n: int):
    return rng.uniform(-1.0, 1.0, size=n).tolist()


@pytest.fixture
def path5():
    """Path 0-1-2-3-4."""
    return build_sparse(5, [(0, 1), (1, 2), (2, 3), (3, 4)])


@pytest.fixture
def path5_weights():
    return np.array(PATH5_WEIGHTS)


@pytest.fixture
def grid3x3():
    return build_grid((3, 3))


@pytest.fixture
def path5_active():
    """Labeling with actives {0, 2, 4} on PATH5."""
    return Assignment.from_nodes(5, [0, 2, 4])


@pytest.fixture
def path5_file(tmp_path):
    """PATH5 written in the sparse graph format."""
    path = tmp_path / "path5.txt"
    path.write_text(PATH5_SPARSE)
    return path


@pytest.fixture
def grid_file(tmp_path):
    """2x3 probability map."""
    path = tmp_path / "grid.txt"
    path.write_text("grid 2 2 3\n0.9 0.8 0.2\n0.1 0.7 0.95\n")
    return path


@pytest.fixture(scope="session")
def test_db():
    """Create test database for the session."""
    db_fd, db_path = tempfile.mkstemp(suffix=".db")
    engine = create_engine(f"sqlite:///{db_path}", connect_args={"check_same_thread": False})

    Base.metadata.create_all(bind=engine)

    yield engine

    engine.dispose()
    os.close(db_fd)
    os.unlink(db_path)


@pytest.fixture(scope="function")
def db_session(test_db):
    """Create database session for each test, emptying the runs table afterwards."""
    TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=test_db)

    session = TestingSessionLocal()
    try:
        yield session
    finally:
        session.rollback()
        session.query(SolveRun).delete()
        session.commit()
        session.close()


@pytest.fixture(scope="function")
def client(db_session):
    """API test client bound to the test database."""
    from fastapi.testclient import TestClient

    from app.database import get_db
    from app.main import app

    def override_get_db():
        yield db_session

    app.dependency_overrides[get_db] = override_get_db
    try:
        yield TestClient(app)
    finally:
        app.dependency_overrides.clear()
