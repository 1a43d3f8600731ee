import pytest

from worker.pipeline.models import Clause, Formula, Graph, SaParams


@pytest.fixture
def three_cycle() -> Graph:
    """Directed 3-cycle 1 -> 2 -> 3 -> 1 (0-based internally)"""
    return Graph(vertex_count=3, edges=((0, 1), (1, 2), (2, 0)))


@pytest.fixture
def four_sat_clause() -> Clause:
    return Clause.of(1, -2, 3, 4)


@pytest.fixture
def small_formula() -> Formula:
    return Formula.from_dimacs(4, [[1, -2, 3, 4], [-1, 2], [3], [-3, -4, 1]])


@pytest.fixture
def fast_sa() -> SaParams:
    return SaParams(sweeps=200, restarts=8, seed=3)
