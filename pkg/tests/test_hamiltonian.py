import numpy as np
import pytest

from worker.pipeline.errors import DomainError, StructuralError, VerificationError
from worker.pipeline.generators import fully_connected, gen_cycle_free, gen_graph
from worker.pipeline.hamiltonian import (
    EdgeEncoding,
    canonical_vector,
    compile_graph,
    decode,
    dimension_for,
    encode_positions,
    lucas_compile,
    lucas_decode,
    optimal_energy,
    size_bound,
    size_report,
    validate_cycle,
)
from worker.pipeline.models import Graph
from worker.pipeline.oracles import find_hamiltonian_cycle
from worker.pipeline.qubo import EdgeBit
from worker.pipeline.solvers import solve_exhaustive


def _vector_for(comp, positions):
    """Vector from {edge: position} using each edge's own bit weights"""
    x = [0] * comp.dimension
    for edge, p in positions.items():
        for var, weight in comp.encoding.bits[edge]:
            if edge[1] == 0:
                x[var] = 1 if p else 0
            else:
                x[var] = 1 if p & weight else 0
    return x


def test_three_cycle_widths(three_cycle):
    enc = encode_positions(three_cycle)
    assert isinstance(enc, EdgeEncoding)
    assert [len(enc.bits[e]) for e in three_cycle.edges] == [1, 2, 1]
    assert enc.dimension == 4
    assert enc.bits[(2, 0)] == [(3, 3)]


def test_fully_connected_ten_dimension():
    g = fully_connected(10)
    assert compile_graph(g).dimension == 306
    assert dimension_for(10, 90, 18) == 306


def test_encode_rejects_tiny_graphs():
    with pytest.raises(DomainError, match=r"\|V\| >= 3"):
        encode_positions(Graph(vertex_count=2, edges=((0, 1), (1, 0))))


def test_three_cycle_optimal_energy(three_cycle):
    comp = compile_graph(three_cycle)
    x = _vector_for(comp, {(0, 1): 1, (1, 2): 2, (2, 0): 3})
    assert comp.accumulator.energy(x) == -12
    assert comp.accumulator.offset == 0


def test_three_cycle_exhaustive_ground_state(three_cycle):
    comp = compile_graph(three_cycle)
    result = solve_exhaustive(comp.accumulator)
    assert result.energy == -12
    assert decode(result.vector, comp) == [0, 1, 2]


@pytest.mark.parametrize("n, expected", [(3, -12), (4, -20), (40, -1640)])
def test_optimal_energy(n, expected):
    assert optimal_energy(n) == expected


def test_shared_tail_conflicts():
    g = Graph(vertex_count=4, edges=((1, 2), (1, 3), (2, 0), (3, 0), (0, 1)))
    comp = compile_graph(g)
    conflict = 2 * 4 * 4
    for u in comp.encoding.variables((1, 2)):
        for v in comp.encoding.variables((1, 3)):
            assert comp.accumulator.get(u, v) >= conflict


def test_dead_end_edge_pays_self_term():
    # vertex 3 has no out-edges, so (1, 3) has no continuation coupling
    g = Graph(vertex_count=4, edges=((0, 1), (1, 2), (2, 0), (1, 3)))
    comp = compile_graph(g)
    for p in range(1, 8):
        x = _vector_for(comp, {(1, 3): p})
        assert comp.accumulator.energy(x) == 2 * p * p


def test_dimension_within_bound():
    for seed in range(10):
        g = gen_graph(6, 18, True, seed)
        comp = compile_graph(g)
        assert comp.dimension <= size_bound(g) == 18 * 3


def test_canonical_vector_hits_target_energy():
    for seed in range(10):
        g = gen_graph(5, 12, True, seed)
        comp = compile_graph(g)
        cycle = find_hamiltonian_cycle(g)
        x = canonical_vector(comp, cycle)
        assert comp.accumulator.energy(x) == optimal_energy(5)
        assert decode(x, comp) == cycle


def test_decode_three_cycle(three_cycle):
    comp = compile_graph(three_cycle)
    x = _vector_for(comp, {(0, 1): 1, (1, 2): 2, (2, 0): 3})
    assert decode(x, comp) == [0, 1, 2]


def test_decode_all_zero_vector(three_cycle):
    comp = compile_graph(three_cycle)
    with pytest.raises(VerificationError, match="no edge at position 1") as err:
        decode([0] * comp.dimension, comp)
    assert err.value.check == "no edge at position 1"


def test_decode_duplicate_source():
    g = Graph(vertex_count=3, edges=((0, 1), (0, 2), (1, 2), (2, 0), (1, 0), (2, 1)))
    comp = compile_graph(g)
    x = _vector_for(comp, {(0, 1): 1, (0, 2): 1})
    with pytest.raises(VerificationError, match="duplicate source"):
        decode(x, comp)


def test_decode_broken_chain():
    g = fully_connected(4)
    comp = compile_graph(g)
    x = _vector_for(comp, {(0, 1): 1, (2, 3): 2, (3, 2): 3, (1, 0): 4})
    with pytest.raises(VerificationError, match="broken chain"):
        decode(x, comp)


def test_decode_length_mismatch(three_cycle):
    comp = compile_graph(three_cycle)
    with pytest.raises(StructuralError, match="does not match"):
        decode([0, 0], comp)


def test_validate_cycle_checks(three_cycle):
    validate_cycle(three_cycle, [0, 1, 2])
    with pytest.raises(VerificationError, match="cycle length"):
        validate_cycle(three_cycle, [0, 1])
    with pytest.raises(VerificationError, match="start vertex"):
        validate_cycle(three_cycle, [1, 2, 0])
    with pytest.raises(VerificationError, match="vertex visited twice"):
        validate_cycle(three_cycle, [0, 1, 1])
    with pytest.raises(VerificationError, match="missing edge"):
        validate_cycle(three_cycle, [0, 2, 1])


def test_registry_labels(three_cycle):
    comp = compile_graph(three_cycle)
    assert comp.registry.labels == [EdgeBit((0, 1), 0), EdgeBit((1, 2), 0), EdgeBit((1, 2), 1), EdgeBit((2, 0), 0)]


def test_size_report():
    assert size_report(fully_connected(10)) == (306, 100)
    assert size_report(Graph(vertex_count=3, edges=((0, 1), (1, 2), (2, 0)))) == (4, 9)


def test_size_report_linear_density_n32():
    g = gen_graph(32, 128, True, seed=4)
    ours, lucas = size_report(g)
    assert lucas == 1024
    assert ours < lucas
    assert ours <= 128 * 6


def test_undirected_graph_expands_both_ways():
    g = Graph.from_undirected(3, [(0, 1), (1, 2), (2, 0)])
    assert len(g.edges) == 6
    comp = compile_graph(g)
    assert solve_exhaustive(comp.accumulator).energy == -12


def test_lucas_three_cycle(three_cycle):
    comp = lucas_compile(three_cycle)
    assert comp.dimension == 9
    # vertex v in slot v
    x = [1 if j == v else 0 for v in range(3) for j in range(3)]
    assert comp.accumulator.energy(x) == 0
    assert lucas_decode(x, comp) == [0, 1, 2]

    doubled = list(x)
    doubled[0 * 3 + 1] = 1
    assert comp.accumulator.energy(doubled) >= 1


def test_lucas_ground_state_decodes(three_cycle):
    comp = lucas_compile(three_cycle)
    result = solve_exhaustive(comp.accumulator)
    assert result.energy == 0
    assert lucas_decode(result.vector, comp) == [0, 1, 2]


def test_lucas_rejects_broken_slot(three_cycle):
    comp = lucas_compile(three_cycle)
    with pytest.raises(VerificationError, match="slot not one-hot"):
        lucas_decode([0] * 9, comp)


PLANTED_GRAPHS = [
    Graph(vertex_count=3, edges=((0, 1), (1, 2), (2, 0))),
    Graph.from_undirected(3, [(0, 1), (1, 2), (2, 0)]),
    Graph(vertex_count=4, edges=((0, 1), (1, 2), (2, 3), (3, 0), (1, 3))),
    Graph(vertex_count=4, edges=((0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (0, 2))),
    gen_graph(4, 5, True, seed=11),
    gen_graph(4, 6, True, seed=12),
]

CYCLE_FREE_GRAPHS = [
    Graph(vertex_count=4, edges=((0, 1), (1, 2), (2, 0), (2, 3), (3, 1))),
    Graph(vertex_count=4, edges=((0, 1), (1, 2), (2, 0), (1, 3), (2, 3))),
    *(gen_cycle_free(4, 5, seed=s) for s in range(3)),
]


def _all_energies(acc):
    """Every vector of length n (row i is the binary expansion of i) with its energy"""
    n = acc.n
    X = (np.arange(2 ** n)[:, None] >> np.arange(n)[::-1]) & 1
    Q = acc.to_dense()
    return X, acc.offset + np.einsum("ij,jk,ik->i", X, Q, X)


@pytest.mark.parametrize("g", PLANTED_GRAPHS + CYCLE_FREE_GRAPHS)
def test_decode_accepts_exactly_the_target_energy(g):
    comp = compile_graph(g)
    assert comp.dimension <= 18
    target = optimal_energy(g.vertex_count)
    X, energies = _all_energies(comp.accumulator)
    assert energies.min() >= target
    for x, energy in zip(X.tolist(), energies.tolist()):
        try:
            decode(x, comp)
        except VerificationError:
            assert energy > target, x
        else:
            assert energy == target, x


@pytest.mark.parametrize("g", PLANTED_GRAPHS)
def test_every_minimizer_decodes_to_a_cycle(g):
    comp = compile_graph(g)
    X, energies = _all_energies(comp.accumulator)
    assert energies.min() == optimal_energy(g.vertex_count)
    for x in X[energies == energies.min()].tolist():
        validate_cycle(g, decode(x, comp))


@pytest.mark.parametrize("g", CYCLE_FREE_GRAPHS)
def test_cycle_free_minimum_stays_above_target(g):
    assert find_hamiltonian_cycle(g) is None
    comp = compile_graph(g)
    assert solve_exhaustive(comp.accumulator).energy > optimal_energy(g.vertex_count)


@pytest.mark.parametrize("g", PLANTED_GRAPHS[2:] + CYCLE_FREE_GRAPHS)
def test_lucas_agrees_on_cycle_existence(g):
    has_cycle = find_hamiltonian_cycle(g) is not None
    ours = solve_exhaustive(compile_graph(g).accumulator).energy == optimal_energy(g.vertex_count)
    lucas = lucas_compile(g)
    lucas_result = solve_exhaustive(lucas.accumulator)
    assert (lucas_result.energy == 0) is ours is has_cycle
    if has_cycle:
        validate_cycle(g, lucas_decode(lucas_result.vector, lucas))
