import pytest

from amdriver import enumerate_vertices


@pytest.fixture(scope="session")
def vertices_by_n():
    """Vertex lists for the dimensions the suite exercises, enumerated once."""
    return {n: enumerate_vertices(n) for n in (1, 2, 3, 4)}


@pytest.fixture(scope="session")
def vertices3(vertices_by_n):
    return vertices_by_n[3]


@pytest.fixture(scope="session")
def vertices4(vertices_by_n):
    return vertices_by_n[4]
