"""
Seeded random instance generation (k-SAT formulas, planted-cycle and cycle-free graphs)
"""
from typing import List, Tuple

import numpy as np

from .config import GEN_MAX_RETRIES
from .errors import GenerationError
from .logging import setup_logger
from .models import Clause, Formula, Graph, Literal
from .oracles import find_hamiltonian_cycle, is_satisfiable

logger = setup_logger("generators")


def _random_formula(rng: np.random.Generator, num_vars: int, num_clauses: int, k: int) -> Formula:
    clauses = []
    for _ in range(num_clauses):
        chosen = rng.choice(num_vars, size=k, replace=False) + 1
        negated = rng.integers(0, 2, size=k)
        clauses.append(Clause(literals=tuple(
            Literal(variable=int(v), negated=bool(s)) for v, s in zip(chosen, negated))))
    return Formula(variables=list(range(1, num_vars + 1)), clauses=clauses)


def gen_sat(num_vars: int, num_clauses: int, k: int, seed: int,
            require_satisfiable: bool = True, max_retries: int = GEN_MAX_RETRIES) -> Formula:
    """Random k-SAT: k distinct variables per clause, independent polarities"""
    if k < 1 or k > num_vars:
        raise GenerationError(f"clause length k={k} needs 1 <= k <= vars={num_vars}")
    if num_clauses < 1:
        raise GenerationError("at least one clause is required")
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_retries + 1):
        f = _random_formula(rng, num_vars, num_clauses, k)
        if not require_satisfiable or is_satisfiable(f)[0]:
            if attempt > 1:
                logger.debug(f"Satisfiable formula found after {attempt} attempts (seed={seed})")
            return f
    raise GenerationError(
        f"no satisfiable formula after {max_retries} attempts at clause/variable ratio "
        f"{num_clauses / num_vars:.2f} (k={k})")


def max_edges(vertices: int, directed: bool) -> int:
    return vertices * (vertices - 1) if directed else vertices * (vertices - 1) // 2


def _candidates(vertices: int, directed: bool) -> List[Tuple[int, int]]:
    if directed:
        return [(a, b) for a in range(vertices) for b in range(vertices) if a != b]
    return [(a, b) for a in range(vertices) for b in range(a + 1, vertices)]


def gen_graph(vertices: int, edges: int, directed: bool, seed: int, plant_cycle: bool = True) -> Graph:
    """edges counts directed edges, or undirected pairs (expanded both ways) when not directed"""
    if vertices < 3:
        raise GenerationError(f"graphs need at least 3 vertices, got {vertices}")
    limit = max_edges(vertices, directed)
    if edges > limit or edges < 0:
        raise GenerationError(f"{edges} edges requested, a graph on {vertices} vertices has at most {limit}")
    if plant_cycle and edges < vertices:
        raise GenerationError(f"a planted cycle needs {vertices} edges, only {edges} requested")

    rng = np.random.default_rng(seed)
    chosen = set()
    if plant_cycle:
        order = [int(v) for v in rng.permutation(vertices)]
        for i in range(vertices):
            a, b = order[i], order[(i + 1) % vertices]
            chosen.add((a, b) if directed else (min(a, b), max(a, b)))

    remaining = [e for e in _candidates(vertices, directed) if e not in chosen]
    extra = edges - len(chosen)
    if extra > 0:
        picks = rng.choice(len(remaining), size=extra, replace=False)
        chosen.update(remaining[int(i)] for i in picks)

    pairs = sorted(chosen)
    if directed:
        return Graph(vertex_count=vertices, edges=tuple(pairs))
    return Graph.from_undirected(vertices, pairs)


def fully_connected(vertices: int) -> Graph:
    return Graph(vertex_count=vertices, edges=tuple(_candidates(vertices, True)))


def linear_density(vertices: int, factor: int, seed: int) -> Graph:
    """Planted directed graph with |E| = factor * |V| (capped at the complete graph)"""
    return gen_graph(vertices, min(factor * vertices, max_edges(vertices, True)), True, seed)


def gen_cycle_free(vertices: int, edges: int, seed: int, directed: bool = True,
                   max_retries: int = GEN_MAX_RETRIES) -> Graph:
    """Random graph the backtracking oracle proves has no Hamiltonian cycle"""
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        g = gen_graph(vertices, edges, directed, int(rng.integers(0, 2**31)), plant_cycle=False)
        if find_hamiltonian_cycle(g) is None:
            return g
    raise GenerationError(f"no cycle-free graph with |V|={vertices}, |E|={edges} after {max_retries} attempts")
