import pytest

from worker.pipeline.errors import CapacityError
from worker.pipeline.generators import gen_graph, gen_sat
from worker.pipeline.models import Clause, Formula, Graph
from worker.pipeline.oracles import (
    find_hamiltonian_cycle,
    is_satisfiable,
    maxsat_branch_and_bound,
    maxsat_enumerate,
    maxsat_min_unsat,
)
from worker.pipeline.sat import unsat_count


def test_complementary_units():
    f = Formula.from_dimacs(1, [[1], [-1]])
    count, witness = maxsat_min_unsat(f)
    assert count == 1
    assert unsat_count(f, witness) == 1
    assert is_satisfiable(f) == (False, None)


def test_satisfiable_formula_has_zero_count(small_formula):
    assert maxsat_min_unsat(small_formula)[0] == 0
    ok, model = is_satisfiable(small_formula)
    assert ok
    assert unsat_count(small_formula, model) == 0


@pytest.mark.parametrize("seed", range(5))
def test_enumeration_agrees_with_branch_and_bound(seed):
    f = gen_sat(8, 20, 4, seed=seed, require_satisfiable=False)
    assert maxsat_enumerate(f)[0] == maxsat_branch_and_bound(f)[0]


def test_branch_and_bound_with_empty_clause():
    f = Formula(variables=[1], clauses=[Clause.of(1), Clause()])
    assert maxsat_branch_and_bound(f)[0] == 1


def test_maxsat_capacity():
    f = Formula.from_dimacs(27, [[1]])
    with pytest.raises(CapacityError, match="26 variables"):
        maxsat_min_unsat(f)


def test_empty_clause_is_unsatisfiable():
    f = Formula(variables=[1], clauses=[Clause.of(1), Clause()])
    assert is_satisfiable(f) == (False, None)


def test_dpll_agrees_with_maxsat_oracle():
    for seed in range(200):
        f = gen_sat(6, 24, 3, seed=seed, require_satisfiable=False)
        ok, model = is_satisfiable(f)
        assert ok == (maxsat_min_unsat(f)[0] == 0)
        if ok:
            assert unsat_count(f, model) == 0


def test_three_cycle_oracle(three_cycle):
    assert find_hamiltonian_cycle(three_cycle) == [0, 1, 2]


def test_broken_three_cycle_has_no_cycle():
    assert find_hamiltonian_cycle(Graph(vertex_count=3, edges=((0, 1), (1, 2)))) is None


def test_planted_cycles_are_found():
    for seed in range(20):
        g = gen_graph(7, 14, True, seed)
        assert find_hamiltonian_cycle(g) is not None


def test_hc_oracle_capacity():
    with pytest.raises(CapacityError):
        find_hamiltonian_cycle(Graph(vertex_count=21))
