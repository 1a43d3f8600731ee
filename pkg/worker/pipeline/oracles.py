"""
Classical ground truth: Max-SAT enumeration / branch-and-bound, DPLL, Hamiltonian cycle backtracking

Every answer is checked by direct evaluation before it is returned.
"""
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import EXHAUSTIVE_CHUNK_BITS, HC_ORACLE_LIMIT, MAXSAT_ENUMERATION_LIMIT, MAXSAT_LIMIT
from .errors import CapacityError
from .hamiltonian import START, validate_cycle
from .logging import setup_logger
from .models import Formula, Graph
from .sat import unsat_count

logger = setup_logger("oracles")


def _verified(f: Formula, count: int, witness: Dict[int, int]) -> Tuple[int, Dict[int, int]]:
    if unsat_count(f, witness) != count:
        raise RuntimeError(f"oracle witness leaves {unsat_count(f, witness)} clauses unsatisfied, claimed {count}")
    return count, witness


def maxsat_enumerate(f: Formula) -> Tuple[int, Dict[int, int]]:
    """Minimum unsatisfied-clause count by enumerating all 2^|X| assignments"""
    n = len(f.variables)
    if n > MAXSAT_ENUMERATION_LIMIT:
        raise CapacityError(f"enumeration is limited to {MAXSAT_ENUMERATION_LIMIT} variables, got {n}")
    column = {v: i for i, v in enumerate(f.variables)}
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    chunk = 1 << min(n, EXHAUSTIVE_CHUNK_BITS)

    best_count, best_index = None, 0
    for start in range(0, total, chunk):
        m = np.arange(start, min(start + chunk, total), dtype=np.int64)
        X = ((m[:, None] >> shifts) & 1).astype(bool)
        unsat = np.zeros(len(m), dtype=np.int64)
        for clause in f.clauses:
            satisfied = np.zeros(len(m), dtype=bool)
            for lit in clause.literals:
                col = X[:, column[lit.variable]]
                satisfied |= ~col if lit.negated else col
            unsat += ~satisfied
        idx = int(np.argmin(unsat))
        if best_count is None or unsat[idx] < best_count:
            best_count, best_index = int(unsat[idx]), start + idx

    witness = {v: (best_index >> int(s)) & 1 for v, s in zip(f.variables, shifts)}
    return _verified(f, best_count, witness)


def maxsat_branch_and_bound(f: Formula) -> Tuple[int, Dict[int, int]]:
    """Depth-first search over variables, pruning on clauses already falsified"""
    order = list(f.variables)
    # clause falsified once its last variable (in search order) is assigned
    position = {v: i for i, v in enumerate(order)}
    closing: List[List[int]] = [[] for _ in order]
    empty = 0
    for ci, clause in enumerate(f.clauses):
        if not clause.literals:
            empty += 1
            continue
        closing[max(position[lit.variable] for lit in clause.literals)].append(ci)

    best = {"count": None, "witness": None}
    assignment: Dict[int, int] = {}

    def search(depth: int, falsified: int) -> None:
        if best["count"] is not None and falsified >= best["count"]:
            return
        if depth == len(order):
            best["count"], best["witness"] = falsified, dict(assignment)
            return
        var = order[depth]
        for value in (0, 1):
            assignment[var] = value
            newly = sum(1 for ci in closing[depth] if not f.clauses[ci].is_satisfied(assignment))
            search(depth + 1, falsified + newly)
        del assignment[var]

    search(0, empty)
    return _verified(f, best["count"], best["witness"])


def maxsat_min_unsat(f: Formula, limit: int = MAXSAT_LIMIT) -> Tuple[int, Dict[int, int]]:
    """Exact Max-SAT optimum as (unsatisfied count, witness assignment)"""
    n = len(f.variables)
    if n > limit:
        raise CapacityError(f"Max-SAT oracle is limited to {limit} variables, got {n}")
    if n <= MAXSAT_ENUMERATION_LIMIT:
        return maxsat_enumerate(f)
    return maxsat_branch_and_bound(f)


def _dpll(clauses: List[List[int]], model: Dict[int, bool]) -> Optional[Dict[int, bool]]:
    clauses = [list(c) for c in clauses]
    model = dict(model)
    # unit propagation
    while True:
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is None:
            break
        model[abs(unit)] = unit > 0
        clauses = [[l for l in c if l != -unit] for c in clauses if unit not in c]
        if any(not c for c in clauses):
            return None
    if not clauses:
        return model
    if any(not c for c in clauses):
        return None
    lit = clauses[0][0]
    for choice in (lit, -lit):
        result = _dpll(clauses + [[choice]], model)
        if result is not None:
            return result
    return None


def is_satisfiable(f: Formula) -> Tuple[bool, Optional[Dict[int, int]]]:
    """DPLL with unit propagation; unassigned variables default to 0 in the model"""
    clauses = f.to_dimacs()
    if any(not c for c in clauses):
        return False, None
    result = _dpll(clauses, {})
    if result is None:
        return False, None
    model = {v: int(result.get(v, False)) for v in f.variables}
    if unsat_count(f, model) != 0:
        raise RuntimeError("DPLL returned a model that leaves clauses unsatisfied")
    return True, model


def find_hamiltonian_cycle(g: Graph, limit: int = HC_ORACLE_LIMIT) -> Optional[List[int]]:
    """Backtracking from the start vertex with a visited set; None if no cycle exists"""
    n = g.vertex_count
    if n > limit:
        raise CapacityError(f"Hamiltonian cycle oracle is limited to {limit} vertices, got {n}")
    succ = g.successors()
    edges = g.edge_set
    path = [START]
    visited = [False] * n
    visited[START] = True

    def extend() -> bool:
        if len(path) == n:
            return (path[-1], START) in edges
        for nxt in succ[path[-1]]:
            if not visited[nxt]:
                visited[nxt] = True
                path.append(nxt)
                if extend():
                    return True
                path.pop()
                visited[nxt] = False
        return False

    if not extend():
        return None
    validate_cycle(g, path)
    return list(path)
