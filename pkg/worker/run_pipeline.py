#!/usr/bin/env python3
"""
Pipeline entry point: QUBO compilation, solving, verification and scaling datasets

(Max) k-SAT 과 Hamiltonian Cycle 을 로그 스케일 QUBO 로 컴파일하고,
데스크 규모 solver 로 풀고, 고전 oracle 로 검증합니다.

실행 예시:
    # 컴파일
    python worker/run_pipeline.py --mode=sat_build --cnf data/f.cnf --out data/f.qubo
    python worker/run_pipeline.py --mode=hc_build --graph data/g.hc --out data/g.qubo --baseline=lucas

    # 풀이 및 검증
    python worker/run_pipeline.py --mode=solve --qubo data/f.qubo --method=sa --seed=7 --out data/f.sol
    python worker/run_pipeline.py --mode=verify --qubo data/f.qubo --solution data/f.sol --cnf data/f.cnf

    # 스케일링 CSV (Figure 1-3 데이터)
    python worker/run_pipeline.py --mode=scaling --figure=3 --range=5:64 --out data/fig3.csv

    # 인스턴스 생성 / 실험 재현
    python worker/run_pipeline.py --mode=generate_sat --vars=10 --clauses=6 --k=4 --seed=1 --out data/f.cnf
    python worker/run_pipeline.py --mode=generate_graph --vertices=6 --edges=18 --seed=1 --out data/g.hc
    python worker/run_pipeline.py --mode=experiment_sat --out data/sat_runs.csv
    python worker/run_pipeline.py --mode=experiment_hc --out data/hc_runs.csv

Execution modes:
    --mode=sat_build        DIMACS CNF -> QUBO file (+ clause ancilla mapping)
    --mode=hc_build         hc graph file -> QUBO file (--baseline ours|lucas)
    --mode=solve            QUBO file -> best vector (--method auto|exhaustive|sa)
    --mode=verify           decode a solution and check it against the instance
    --mode=scaling          ancilla / matrix-size table as CSV (--figure 1|2|3)
    --mode=generate_sat     seeded random k-SAT formula (DIMACS)
    --mode=generate_graph   seeded random graph (planted cycle unless --no-plant)
    --mode=experiment_sat   random satisfiable formulas for k=4,6,8,10
    --mode=experiment_hc    random planted-cycle graphs

Exit codes:
    0 success, 1 verification failure, 2 input error, 3 capacity error

환경 변수:
    LOG_LEVEL, QUBO_SEED, SA_WORKERS, EXHAUSTIVE_LIMIT (common/config.py)
"""
import argparse
import sys
from pathlib import Path
from typing import Optional, Tuple

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from pydantic import ValidationError

from common.config import settings
from services.scaling_service import ScalingService
from worker.pipeline.config import (
    EXPERIMENT_HC_INSTANCES,
    EXPERIMENT_HC_MIN_SUCCESS,
    EXPERIMENT_HC_RESTARTS,
    EXPERIMENT_SAT_INSTANCES,
    EXPERIMENT_SAT_MIN_SUCCESS,
    FIGURE1_K_RANGE,
    FIGURE2_N_RANGE,
    FIGURE3_N_RANGE,
    SA_FINAL_TEMPERATURE,
    SA_RESTARTS,
    SA_SWEEPS,
)
from worker.pipeline.errors import CapacityError, ParseError, QuboCompileError, VerificationError
from worker.pipeline.experiments import (
    required_successes,
    run_hc_experiment,
    run_sat_experiment,
    sat_experiment_passed,
)
from worker.pipeline.formats import (
    dump_cnf,
    dump_graph,
    dump_qubo,
    dump_solution,
    load_cnf,
    load_graph,
    load_qubo,
    load_solution,
)
from worker.pipeline.generators import gen_graph, gen_sat
from worker.pipeline.hamiltonian import (
    compile_graph,
    decode as decode_cycle,
    lucas_compile,
    lucas_decode,
    optimal_energy,
    size_bound,
    size_report,
)
from worker.pipeline.logging import setup_logger
from worker.pipeline.models import SaParams
from worker.pipeline.qubo import PositionVar, serialize
from worker.pipeline.sat import ancilla_levels, compile_formula, decode as decode_assignment, predicted_dimension, unsat_count
from worker.pipeline.solvers import solve

logger = setup_logger("run_pipeline")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3
# shares the code with verification failures; stdout says which
EXIT_INTERNAL = 1


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ParseError(f"--{name.replace('_', '-')} is required for --mode={args.mode}", field=name)


def _sa_params(args: argparse.Namespace, restarts: Optional[int] = None) -> SaParams:
    return SaParams(
        sweeps=args.sweeps,
        restarts=args.restarts if args.restarts is not None else (restarts or SA_RESTARTS),
        t_initial=args.t_initial,
        t_final=args.t_final,
        seed=args.seed,
        workers=args.workers,
        debug_every=args.debug_every,
    )


def _parse_range(text: Optional[str], default: Tuple[int, int]) -> Tuple[int, int]:
    if text is None:
        return default
    lo, sep, hi = text.partition(":")
    try:
        bounds = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise ParseError(f"range must be '<lo>:<hi>', got '{text}'", field="range") from None
    if bounds[0] > bounds[1]:
        raise ParseError(f"empty range '{text}'", field="range")
    return bounds


def _banner(title: str) -> None:
    logger.info("=" * 60)
    logger.info(f"MODE: {title}")
    logger.info("=" * 60)


def run_sat_build_mode(args: argparse.Namespace) -> int:
    _banner("SAT_BUILD - DIMACS CNF -> QUBO")
    _require(args, "cnf", "out")
    f = load_cnf(args.cnf)
    comp = compile_formula(f)
    dump_qubo(comp.accumulator, comp.registry, args.out)

    lengths = sorted({len(c) for c in f.clauses})
    print(f"n={comp.dimension}")
    print(f"predicted={predicted_dimension(f)} (|X|={len(f.variables)} + sum r(k))")
    for k in lengths:
        print(f"clause_length={k} ancilla_levels={ancilla_levels(k)}")
    logger.info(f"QUBO written to {args.out}: n={comp.dimension}, offset={comp.accumulator.offset}")
    return EXIT_OK


def run_hc_build_mode(args: argparse.Namespace) -> int:
    _banner(f"HC_BUILD - graph -> QUBO ({args.baseline})")
    _require(args, "graph", "out")
    g = load_graph(args.graph)
    if args.baseline == "lucas":
        comp = lucas_compile(g)
    else:
        comp = compile_graph(g)
    dump_qubo(comp.accumulator, comp.registry, args.out)

    ours, lucas = size_report(g)
    print(f"n={comp.dimension}")
    print(f"ours={ours} lucas={lucas} bound={size_bound(g)}")
    logger.info(f"QUBO written to {args.out}: n={comp.dimension}")
    return EXIT_OK


def run_solve_mode(args: argparse.Namespace) -> int:
    _banner(f"SOLVE - {args.method}")
    _require(args, "qubo")
    acc, _ = load_qubo(args.qubo)
    result = solve(acc, args.method, args.limit, _sa_params(args))
    if args.out:
        dump_solution(result.vector, args.out)

    print(f"energy={result.energy}")
    print(f"vector={''.join(map(str, result.vector))}")
    print(f"method={result.method} evaluations={result.evaluations} restarts={result.restarts} seed={result.seed}")
    return EXIT_OK


def run_verify_mode(args: argparse.Namespace) -> int:
    _banner("VERIFY - decode and check against the instance")
    _require(args, "qubo", "solution")
    if (args.cnf is None) == (args.graph is None):
        raise ParseError("exactly one of --cnf or --graph is required for --mode=verify", field="instance")

    acc, registry = load_qubo(args.qubo)
    data = Path(args.qubo).read_bytes()
    sol = load_solution(args.solution)
    energy = acc.energy(sol)
    print(f"energy={energy}")

    if args.cnf is not None:
        f = load_cnf(args.cnf)
        comp = compile_formula(f)
        if serialize(comp.accumulator, comp.registry) != data:
            raise VerificationError("qubo mismatch", "QUBO file was not compiled from this formula")
        assignment = decode_assignment(sol, comp)
        unsat = unsat_count(f, assignment)
        print(f"unsatisfied={unsat}")
        if unsat:
            raise VerificationError("not a model", f"{unsat} clauses unsatisfied")
        print("valid=model")
        return EXIT_OK

    g = load_graph(args.graph)
    lucas = any(isinstance(label, PositionVar) for label in registry.labels)
    comp = lucas_compile(g) if lucas else compile_graph(g)
    if serialize(comp.accumulator, comp.registry) != data:
        raise VerificationError("qubo mismatch", "QUBO file was not compiled from this graph")
    cycle = lucas_decode(sol, comp) if lucas else decode_cycle(sol, comp)
    target = 0 if lucas else optimal_energy(g.vertex_count)
    if energy != target:
        raise VerificationError("energy fingerprint", f"energy {energy} != {target}")
    print(f"cycle={' '.join(str(v + 1) for v in cycle)}")
    print("valid=hamiltonian_cycle")
    return EXIT_OK


def run_scaling_mode(args: argparse.Namespace) -> int:
    _banner(f"SCALING - figure {args.figure}")
    _require(args, "figure", "out")
    service = ScalingService()
    if args.figure == 1:
        frame = service.ancilla_frame(_parse_range(args.range, FIGURE1_K_RANGE))
    elif args.figure == 2:
        frame = service.fully_connected_frame(_parse_range(args.range, FIGURE2_N_RANGE))
    else:
        frame = service.linear_density_frame(_parse_range(args.range, FIGURE3_N_RANGE))
    service.write_csv(frame, args.out)

    print(f"rows={len(frame)}")
    if args.figure in (2, 3):
        crossover = service.crossover(frame)
        logger.info(f"Crossover (ours < lucas from here on): {crossover}")
        print(f"crossover={crossover if crossover is not None else 'none'}")
    return EXIT_OK


def run_generate_sat_mode(args: argparse.Namespace) -> int:
    _banner("GENERATE_SAT")
    _require(args, "vars", "clauses", "k", "out")
    f = gen_sat(args.vars, args.clauses, args.k, args.seed, require_satisfiable=not args.unsatisfiable_ok)
    dump_cnf(f, args.out, comment=f"random {args.k}-SAT seed={args.seed}")
    print(f"variables={len(f.variables)} clauses={len(f.clauses)}")
    return EXIT_OK


def run_generate_graph_mode(args: argparse.Namespace) -> int:
    _banner("GENERATE_GRAPH")
    _require(args, "vertices", "edges", "out")
    g = gen_graph(args.vertices, args.edges, not args.undirected, args.seed, plant_cycle=not args.no_plant)
    dump_graph(g, args.out)
    print(f"vertices={g.vertex_count} edges={len(g.edges)}")
    return EXIT_OK


def run_experiment_sat_mode(args: argparse.Namespace) -> int:
    _banner("EXPERIMENT_SAT - random satisfiable formulas, k=4,6,8,10")
    instances = args.instances or EXPERIMENT_SAT_INSTANCES
    stats, frame = run_sat_experiment(instances=instances, seed=args.seed,
                                      params=_sa_params(args), limit=args.limit)
    if args.out:
        ScalingService().write_csv(frame, args.out)
    for k, v in stats["by_k"].items():
        print(f"k={k} sa_solved={v['sa_solved']}/{v['instances']} "
              f"rescued={v['rescued']} unrescued={v['unrescued']}")
    passed = sat_experiment_passed(stats, required_successes(instances, EXPERIMENT_SAT_MIN_SUCCESS))
    return EXIT_OK if passed else EXIT_VERIFY


def run_experiment_hc_mode(args: argparse.Namespace) -> int:
    _banner("EXPERIMENT_HC - random planted-cycle graphs")
    instances = args.instances or EXPERIMENT_HC_INSTANCES
    stats, frame = run_hc_experiment(instances=instances, seed=args.seed,
                                     params=_sa_params(args, restarts=EXPERIMENT_HC_RESTARTS), limit=args.limit)
    if args.out:
        ScalingService().write_csv(frame, args.out)
    print(f"solved={stats['solved']}/{instances} canonical_ok={stats['canonical_ok']}/{instances}")
    passed = (stats["solved"] >= required_successes(instances, EXPERIMENT_HC_MIN_SUCCESS)
              and stats["canonical_ok"] == instances)
    return EXIT_OK if passed else EXIT_VERIFY


MODES = {
    "sat_build": run_sat_build_mode,
    "hc_build": run_hc_build_mode,
    "solve": run_solve_mode,
    "verify": run_verify_mode,
    "scaling": run_scaling_mode,
    "generate_sat": run_generate_sat_mode,
    "generate_graph": run_generate_graph_mode,
    "experiment_sat": run_experiment_sat_mode,
    "experiment_hc": run_experiment_hc_mode,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Logarithmic QUBO compiler for (Max) k-SAT and Hamiltonian Cycle")
    parser.add_argument("--mode", choices=sorted(MODES), required=True, help="Execution mode")
    parser.add_argument("--cnf", type=str, help="DIMACS CNF file")
    parser.add_argument("--graph", type=str, help="hc graph file")
    parser.add_argument("--qubo", type=str, help="QUBO file")
    parser.add_argument("--solution", type=str, help="Solution file (one line of 0/1)")
    parser.add_argument("--out", type=str, help="Output file")
    parser.add_argument("--baseline", choices=["ours", "lucas"], default="ours", help="HC formulation")
    parser.add_argument("--method", choices=["auto", "exhaustive", "sa"], default="auto", help="Solver")
    parser.add_argument("--seed", type=int, default=settings.qubo_seed, help="Random seed")
    parser.add_argument("--sweeps", type=int, default=SA_SWEEPS, help="SA sweeps per restart")
    parser.add_argument("--restarts", type=int, default=None, help="SA restarts")
    parser.add_argument("--t-initial", type=float, default=None, help="SA initial temperature (default max |coeff|)")
    parser.add_argument("--t-final", type=float, default=SA_FINAL_TEMPERATURE, help="SA final temperature")
    parser.add_argument("--workers", type=int, default=settings.sa_workers, help="Threads for SA restarts")
    parser.add_argument("--debug-every", type=int, default=0, help="Recheck SA energy every k moves")
    parser.add_argument("--limit", type=int, default=settings.exhaustive_limit, help="Exhaustive search max n")
    parser.add_argument("--figure", type=int, choices=[1, 2, 3], help="Scaling dataset")
    parser.add_argument("--range", type=str, help="Scaling range '<lo>:<hi>'")
    parser.add_argument("--vars", type=int, help="Generator: variables")
    parser.add_argument("--clauses", type=int, help="Generator: clauses")
    parser.add_argument("--k", type=int, help="Generator: literals per clause")
    parser.add_argument("--unsatisfiable-ok", action="store_true", help="Generator: skip the satisfiability filter")
    parser.add_argument("--vertices", type=int, help="Generator: vertices")
    parser.add_argument("--edges", type=int, help="Generator: edges (pairs when --undirected)")
    parser.add_argument("--undirected", action="store_true", help="Generator: undirected graph")
    parser.add_argument("--no-plant", action="store_true", help="Generator: do not plant a Hamiltonian cycle")
    parser.add_argument("--instances", type=int, help="Experiments: instances (per k for SAT)")
    return parser


def main(argv: Optional[list] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    logger.info(f"Run started: mode={args.mode}, seed={args.seed}")

    try:
        code = MODES[args.mode](args)
    except VerificationError as e:
        logger.error(f"Verification failed: {e}")
        print(f"invalid: {e}")
        return EXIT_VERIFY
    except CapacityError as e:
        logger.error(f"Capacity exceeded: {e}")
        return EXIT_CAPACITY
    except (QuboCompileError, ValidationError, FileNotFoundError) as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT
    except Exception as e:
        logger.error(f"Internal error: {type(e).__name__}: {e}", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}")
        return EXIT_INTERNAL

    logger.info(f"Run completed: mode={args.mode}, exit={code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
