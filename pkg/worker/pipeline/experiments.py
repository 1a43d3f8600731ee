"""
Desk-scale experiments: random satisfiable k-SAT formulas and planted-cycle graphs,
compiled, solved and checked against the classical oracles
"""
import math
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from .config import (
    EXHAUSTIVE_LIMIT,
    EXPERIMENT_HC_DENSITIES,
    EXPERIMENT_HC_INSTANCES,
    EXPERIMENT_HC_RESTARTS,
    EXPERIMENT_HC_VERTICES,
    EXPERIMENT_SAT_CLAUSES,
    EXPERIMENT_SAT_INSTANCES,
    EXPERIMENT_SAT_K_VALUES,
    EXPERIMENT_SAT_VARIABLES,
)
from .errors import VerificationError
from .generators import gen_cycle_free, gen_graph, gen_sat, max_edges
from .hamiltonian import canonical_vector, compile_graph, decode as decode_cycle, optimal_energy
from .logging import setup_logger
from .models import SaParams
from .oracles import find_hamiltonian_cycle
from .sat import compile_formula, decode as decode_assignment, unsat_count
from .solvers import solve_exhaustive, solve_sa

logger = setup_logger("experiments")


def sat_instance_shape(k: int, index: int) -> Tuple[int, int]:
    """(variables, clauses) for instance index; variables are never below k"""
    candidates = [v for v in EXPERIMENT_SAT_VARIABLES if v >= k] or [k]
    num_vars = candidates[index % len(candidates)]
    num_clauses = EXPERIMENT_SAT_CLAUSES[(index // len(candidates)) % len(EXPERIMENT_SAT_CLAUSES)]
    return num_vars, num_clauses


def run_sat_experiment(k_values: Optional[List[int]] = None, instances: int = EXPERIMENT_SAT_INSTANCES,
                       seed: int = 0, params: Optional[SaParams] = None,
                       limit: int = EXHAUSTIVE_LIMIT) -> Tuple[Dict[str, Any], pd.DataFrame]:
    """Compile, anneal, decode, check the model; SA misses are re-solved exhaustively when small"""
    k_values = k_values or EXPERIMENT_SAT_K_VALUES
    params = params or SaParams(seed=seed)
    stats: Dict[str, Any] = {"instances": 0, "sa_solved": 0, "rescued": 0, "unrescued": 0, "by_k": {}}
    rows = []

    for k in k_values:
        per_k = {"instances": instances, "sa_solved": 0, "rescued": 0, "unrescued": 0}
        for index in range(instances):
            num_vars, num_clauses = sat_instance_shape(k, index)
            instance_seed = seed * 100003 + k * 1000 + index
            f = gen_sat(num_vars, num_clauses, k, instance_seed, require_satisfiable=True)
            comp = compile_formula(f)

            result = solve_sa(comp.accumulator, params.model_copy(update={"seed": instance_seed}))
            sa_ok = result.energy == 0 and unsat_count(f, decode_assignment(result.vector, comp)) == 0
            exhaustive_energy, exhaustive_ok = None, None
            if sa_ok:
                per_k["sa_solved"] += 1
            elif comp.dimension <= limit:
                exact = solve_exhaustive(comp.accumulator, limit)
                exhaustive_energy = exact.energy
                exhaustive_ok = exact.energy == 0 and unsat_count(f, decode_assignment(exact.vector, comp)) == 0
                per_k["rescued" if exhaustive_ok else "unrescued"] += 1
                if not exhaustive_ok:
                    logger.warning(f"k={k} instance {index}: exhaustive minimum {exact.energy} is not a model")
            rows.append({"k": k, "index": index, "seed": instance_seed, "variables": num_vars,
                         "clauses": num_clauses, "dimension": comp.dimension, "sa_energy": result.energy,
                         "sa_ok": sa_ok, "exhaustive_energy": exhaustive_energy, "exhaustive_ok": exhaustive_ok})
        stats["by_k"][k] = per_k
        for key in ("instances", "sa_solved", "rescued", "unrescued"):
            stats[key] += per_k[key]
        logger.info(f"k={k}: SA {per_k['sa_solved']}/{instances}, "
                    f"exhaustive rescued {per_k['rescued']}, unrescued {per_k['unrescued']}")

    return stats, pd.DataFrame(rows)


def sat_experiment_passed(stats: Dict[str, Any], required: int) -> bool:
    """SA alone reaches required models per k and no small SA miss fails exhaustive search"""
    return all(v["sa_solved"] >= required and v["unrescued"] == 0 for v in stats["by_k"].values())


def hc_instance_shape(index: int) -> Tuple[int, int]:
    """(vertices, directed edges) for instance index across the density grid"""
    vertices = EXPERIMENT_HC_VERTICES[index % len(EXPERIMENT_HC_VERTICES)]
    density = EXPERIMENT_HC_DENSITIES[(index // len(EXPERIMENT_HC_VERTICES)) % len(EXPERIMENT_HC_DENSITIES)]
    edges = min(max(vertices, int(round(density * vertices))), max_edges(vertices, True))
    return vertices, edges


def run_hc_experiment(instances: int = EXPERIMENT_HC_INSTANCES, seed: int = 0,
                      params: Optional[SaParams] = None,
                      limit: int = EXHAUSTIVE_LIMIT) -> Tuple[Dict[str, Any], pd.DataFrame]:
    """Planted-cycle graphs: the best vector must decode to a cycle with energy -|V|(|V|+1)"""
    params = params or SaParams(seed=seed, restarts=EXPERIMENT_HC_RESTARTS)
    stats = {"instances": instances, "solved": 0, "canonical_ok": 0}
    rows = []

    for index in range(instances):
        vertices, edges = hc_instance_shape(index)
        instance_seed = seed * 100003 + index
        g = gen_graph(vertices, edges, True, instance_seed, plant_cycle=True)
        comp = compile_graph(g)
        target = optimal_energy(vertices)

        cycle = find_hamiltonian_cycle(g)
        canonical_ok = cycle is not None and comp.accumulator.energy(canonical_vector(comp, cycle)) == target
        stats["canonical_ok"] += canonical_ok

        if comp.dimension <= limit:
            result, method = solve_exhaustive(comp.accumulator, limit), "exhaustive"
        else:
            result, method = solve_sa(comp.accumulator, params.model_copy(update={"seed": instance_seed})), "sa"
        try:
            decode_cycle(result.vector, comp)
            valid = True
        except VerificationError as e:
            logger.warning(f"Instance {index} (|V|={vertices}, |E|={edges}) rejected: {e}")
            valid = False
        ok = valid and result.energy == target
        stats["solved"] += ok
        rows.append({"index": index, "seed": instance_seed, "vertices": vertices, "edges": edges,
                     "dimension": comp.dimension, "method": method, "energy": result.energy,
                     "target": target, "valid_cycle": ok, "canonical_ok": canonical_ok})

    logger.info(f"HC experiment: {stats['solved']}/{instances} solved, "
                f"{stats['canonical_ok']}/{instances} canonical encodings at the target energy")
    return stats, pd.DataFrame(rows)


def run_negative_controls(count: int = 20, seed: int = 0, limit: int = 22) -> Tuple[Dict[str, Any], pd.DataFrame]:
    """Cycle-free graphs: exhaustive minimum must stay strictly above -|V|(|V|+1)"""
    shapes = [(3, 2), (3, 3), (4, 4), (4, 5), (4, 6)]
    stats = {"graphs": 0, "above_target": 0}
    rows = []
    attempt = 0
    while stats["graphs"] < count:
        vertices, edges = shapes[attempt % len(shapes)]
        g = gen_cycle_free(vertices, edges, seed * 100003 + attempt)
        attempt += 1
        comp = compile_graph(g)
        if comp.dimension > limit:
            continue
        result = solve_exhaustive(comp.accumulator, limit)
        above = result.energy > optimal_energy(vertices)
        stats["graphs"] += 1
        stats["above_target"] += above
        rows.append({"vertices": vertices, "edges": edges, "dimension": comp.dimension,
                     "energy": result.energy, "target": optimal_energy(vertices), "above_target": above})
    logger.info(f"Negative controls: {stats['above_target']}/{stats['graphs']} above the cycle energy")
    return stats, pd.DataFrame(rows)


def required_successes(instances: int, fraction: float) -> int:
    return math.ceil(round(fraction * instances, 9))
