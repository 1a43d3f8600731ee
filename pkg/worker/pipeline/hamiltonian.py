"""
Hamiltonian Cycle to QUBO compilation with binary edge positions

Every directed edge e carries a position P_e (0 = not in the cycle). Edges out
of the start vertex (vertex 0) need one bit (P in {0, 1}), edges into it one bit
of weight |V| (P in {0, |V|}), all other edges ceil(log2(|V| + 1)) bits.
The optimum energy is -|V| (|V| + 1).
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DomainError, StructuralError, VerificationError
from .logging import setup_logger
from .models import Graph
from .qubo import AffineExpr, EdgeBit, PositionVar, QuboAccumulator, VariableRegistry
from .sat import counter_width

logger = setup_logger("hamiltonian")

START = 0
Edge = Tuple[int, int]


def _check_graph(g: Graph) -> None:
    if g.vertex_count < 3:
        raise DomainError(f"Hamiltonian cycle encoding needs |V| >= 3, got {g.vertex_count}")


def edge_width(g: Graph, edge: Edge) -> int:
    a, b = edge
    if a == START or b == START:
        return 1
    return counter_width(g.vertex_count)


def dimension_for(vertex_count: int, edge_count: int, start_incident: int) -> int:
    """Width-rule variable count for a graph described only by its counts"""
    return start_incident + (edge_count - start_incident) * counter_width(vertex_count)


def size_bound(g: Graph) -> int:
    """|E| * ceil(log2(|V| + 1))"""
    return len(g.edges) * counter_width(g.vertex_count)


def optimal_energy(vertex_count: int) -> int:
    if vertex_count < 3:
        raise DomainError(f"|V| must be >= 3, got {vertex_count}")
    return -vertex_count * (vertex_count + 1)


class EdgeEncoding:
    """Per-edge (variable id, weight) lists defining P_edge"""

    def __init__(self, g: Graph, registry: VariableRegistry):
        self.vertex_count = g.vertex_count
        self.edges: List[Edge] = list(g.edges)
        self.bits: Dict[Edge, List[Tuple[int, int]]] = {}
        for edge in self.edges:
            a, b = edge
            if a == START:
                weights = [1]
            elif b == START:
                weights = [g.vertex_count]
            else:
                weights = [1 << j for j in range(edge_width(g, edge))]
            self.bits[edge] = [(registry.add(EdgeBit(edge, j)), w) for j, w in enumerate(weights)]

    def expr(self, edge: Edge) -> AffineExpr:
        return AffineExpr(0, self.bits[edge])

    def variables(self, edge: Edge) -> List[int]:
        return [var for var, _ in self.bits[edge]]

    def position(self, x: Sequence[int], edge: Edge) -> int:
        return sum(w * int(x[var]) for var, w in self.bits[edge])

    @property
    def dimension(self) -> int:
        return sum(len(b) for b in self.bits.values())


def encode_positions(g: Graph, registry: Optional[VariableRegistry] = None) -> EdgeEncoding:
    _check_graph(g)
    return EdgeEncoding(g, registry if registry is not None else VariableRegistry())


@dataclass
class HcCompilation:
    accumulator: QuboAccumulator
    registry: VariableRegistry
    encoding: EdgeEncoding
    graph: Graph

    @property
    def dimension(self) -> int:
        return self.accumulator.n


def compile_graph(g: Graph) -> HcCompilation:
    """Per-edge self terms, 2|V|^2 conflicts, successor-direction continuation couplings"""
    _check_graph(g)
    registry = VariableRegistry()
    encoding = encode_positions(g, registry)
    acc = QuboAccumulator(len(registry))
    n = g.vertex_count
    conflict = 2 * n * n

    stats = {"self_terms": 0, "conflict_pairs": 0, "continuations": 0}
    for edge in encoding.edges:
        a, b = edge
        P = encoding.expr(edge)
        acc.add_squared(P, 2)
        if b == START:
            acc.add_linear(P, -2 * (n + 1))
        stats["self_terms"] += 1

        for other in encoding.edges:
            c, d = other
            if (a == c) != (b == d):
                for u in encoding.variables(edge):
                    for v in encoding.variables(other):
                        acc.add_entry(u, v, conflict)
                stats["conflict_pairs"] += 1
            elif b == c and b != START:
                # -2 P_next P_prev, once per consecutive pair
                acc.add_bilinear(encoding.expr(other), P, -2)
                stats["continuations"] += 1

    if acc.n > size_bound(g):
        raise RuntimeError(f"dimension {acc.n} exceeds |E| * ceil(log2(|V|+1)) = {size_bound(g)}")
    logger.info(f"Compiled graph: |V|={n}, |E|={len(g.edges)}, n={acc.n}, {stats}")
    return HcCompilation(acc, registry, encoding, g)


def validate_cycle(g: Graph, cycle: Sequence[int]) -> None:
    """Raise VerificationError naming the first failed check"""
    n = g.vertex_count
    if len(cycle) != n:
        raise VerificationError("cycle length", f"expected {n} vertices, got {len(cycle)}")
    if cycle[0] != START:
        raise VerificationError("start vertex", f"cycle starts at {cycle[0]}, not {START}")
    if len(set(cycle)) != n:
        raise VerificationError("vertex visited twice", str(list(cycle)))
    edges = g.edge_set
    for i in range(n):
        step = (cycle[i], cycle[(i + 1) % n])
        if step not in edges:
            raise VerificationError("missing edge", f"{step} is not in the graph")


def decode(sol: Sequence[int], comp: HcCompilation) -> List[int]:
    """Vertex sequence starting at vertex 0, or VerificationError"""
    if len(sol) != comp.dimension:
        raise StructuralError(f"solution length {len(sol)} does not match dimension {comp.dimension}")
    g, enc = comp.graph, comp.encoding
    n = g.vertex_count

    active = {edge: enc.position(sol, edge) for edge in enc.edges}
    active = {edge: p for edge, p in active.items() if p >= 1}

    tails, heads = set(), set()
    for (a, b) in active:
        if a in tails:
            raise VerificationError("duplicate source", f"vertex {a} has two active out-edges")
        if b in heads:
            raise VerificationError("duplicate target", f"vertex {b} has two active in-edges")
        tails.add(a)
        heads.add(b)

    by_position: Dict[int, Edge] = {}
    for edge, p in active.items():
        if p > n:
            raise VerificationError("position out of range", f"edge {edge} at position {p} > {n}")
        if p in by_position:
            raise VerificationError("duplicate position", f"edges {by_position[p]} and {edge} at {p}")
        by_position[p] = edge

    first = by_position.get(1)
    if first is None or first[0] != START:
        raise VerificationError("no edge at position 1", "position 1 must leave the start vertex")
    missing = [p for p in range(1, n + 1) if p not in by_position]
    if missing:
        raise VerificationError("missing position", f"no edge at positions {missing}")
    for p in range(1, n):
        if by_position[p][1] != by_position[p + 1][0]:
            raise VerificationError("broken chain", f"{by_position[p]} then {by_position[p + 1]}")
    if by_position[n][1] != START:
        raise VerificationError("no return to start", f"position {n} is {by_position[n]}")

    cycle = [by_position[p][0] for p in range(1, n + 1)]
    validate_cycle(g, cycle)
    return cycle


def canonical_vector(comp: HcCompilation, cycle: Sequence[int]) -> List[int]:
    """Binary vector placing the cycle's i-th edge at position i + 1"""
    validate_cycle(comp.graph, cycle)
    n = comp.graph.vertex_count
    x = [0] * comp.dimension
    for i in range(n):
        edge = (cycle[i], cycle[(i + 1) % n])
        position = i + 1
        for var, weight in comp.encoding.bits[edge]:
            if edge[1] == START or edge[0] == START:
                x[var] = 1
            else:
                x[var] = 1 if position & weight else 0
    return x


def size_report(g: Graph) -> Tuple[int, int]:
    """(ours, lucas) dimensions without building either matrix"""
    _check_graph(g)
    ours = sum(edge_width(g, edge) for edge in g.edges)
    return ours, g.vertex_count ** 2


# Lucas one-hot baseline: x[v, j] = vertex v at slot j

@dataclass
class LucasCompilation:
    accumulator: QuboAccumulator
    registry: VariableRegistry
    graph: Graph

    @property
    def dimension(self) -> int:
        return self.accumulator.n


def lucas_compile(g: Graph, penalty: int = 1) -> LucasCompilation:
    """One-hot rows and columns plus non-edge adjacency with cyclic slots; ground energy 0"""
    _check_graph(g)
    n = g.vertex_count
    registry = VariableRegistry(PositionVar(v, j) for v in range(n) for j in range(n))
    acc = QuboAccumulator(len(registry))

    def var(v: int, j: int) -> int:
        return v * n + j

    for v in range(n):
        acc.add_squared(1 - AffineExpr(0, [(var(v, j), 1) for j in range(n)]), penalty)
    for j in range(n):
        acc.add_squared(1 - AffineExpr(0, [(var(v, j), 1) for v in range(n)]), penalty)

    edges = g.edge_set
    for u in range(n):
        for v in range(n):
            if u != v and (u, v) not in edges:
                for j in range(n):
                    acc.add_entry(var(u, j), var(v, (j + 1) % n), penalty)

    logger.info(f"Compiled Lucas baseline: |V|={n}, n={acc.n}, offset={acc.offset}")
    return LucasCompilation(acc, registry, g)


def lucas_decode(sol: Sequence[int], comp: LucasCompilation) -> List[int]:
    if len(sol) != comp.dimension:
        raise StructuralError(f"solution length {len(sol)} does not match dimension {comp.dimension}")
    n = comp.graph.vertex_count
    order = []
    for j in range(n):
        slot = [v for v in range(n) if sol[v * n + j]]
        if len(slot) != 1:
            raise VerificationError("slot not one-hot", f"slot {j} holds {slot}")
        order.append(slot[0])
    if len(set(order)) != n:
        raise VerificationError("vertex visited twice", str(order))
    shift = order.index(START)
    cycle = order[shift:] + order[:shift]
    validate_cycle(comp.graph, cycle)
    return cycle
