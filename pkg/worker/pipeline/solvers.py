"""
Desk-scale QUBO minimization: exhaustive enumeration and seeded simulated annealing
"""
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np

from .config import EXHAUSTIVE_CHUNK_BITS, EXHAUSTIVE_LIMIT
from .errors import CapacityError, ParameterError
from .logging import setup_logger
from .models import SaParams, SolveResult
from .qubo import QuboAccumulator

logger = setup_logger("solvers")


def _checked_result(acc: QuboAccumulator, vector: List[int], energy: int, **stats) -> SolveResult:
    recomputed = acc.energy(vector)
    if recomputed != energy:
        raise RuntimeError(f"solver reported energy {energy} but the vector evaluates to {recomputed}")
    return SolveResult(vector=vector, energy=energy, **stats)


def solve_exhaustive(acc: QuboAccumulator, limit: int = EXHAUSTIVE_LIMIT) -> SolveResult:
    """Global minimum; ties go to the lexicographically smallest vector"""
    n = acc.n
    if n > limit:
        raise CapacityError(f"exhaustive search is limited to n <= {limit}, got n={n}; use simulated annealing")
    if n == 0:
        return _checked_result(acc, [], acc.offset, evaluations=1, method="exhaustive")

    Q = acc.to_dense()
    d = np.diag(Q).copy()
    U = np.triu(Q, 1)
    # x_0 is the most significant bit, so integer order is lexicographic order
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    chunk = 1 << min(n, EXHAUSTIVE_CHUNK_BITS)

    best_energy: Optional[int] = None
    best_index = 0
    for start in range(0, total, chunk):
        m = np.arange(start, start + chunk, dtype=np.int64)
        X = (m[:, None] >> shifts) & 1
        energies = X @ d + ((X @ U) * X).sum(axis=1)
        idx = int(np.argmin(energies))
        if best_energy is None or energies[idx] < best_energy:
            best_energy = int(energies[idx])
            best_index = start + idx

    vector = [(best_index >> int(s)) & 1 for s in shifts]
    logger.debug(f"Exhaustive search over 2^{n} vectors: energy={best_energy + acc.offset}")
    return _checked_result(acc, vector, best_energy + acc.offset, evaluations=total, method="exhaustive")


def temperature_schedule(acc: QuboAccumulator, params: SaParams) -> np.ndarray:
    """Geometric schedule from t_initial (default max |coefficient|) down to t_final"""
    t_initial = params.t_initial
    if t_initial is None:
        t_initial = max(float(acc.max_abs_coefficient()), params.t_final)
    if t_initial < params.t_final:
        raise ParameterError(f"initial temperature {t_initial} is below final temperature {params.t_final}")
    if params.sweeps == 1:
        return np.array([t_initial])
    return np.geomspace(t_initial, params.t_final, params.sweeps)


def _anneal_block(acc: QuboAccumulator, d: np.ndarray, W: np.ndarray, temperatures: np.ndarray,
                  seeds: List[np.random.SeedSequence], debug_every: int) -> Tuple[np.ndarray, np.ndarray]:
    """Anneal a block of restarts in lockstep; every restart draws only from its own generator"""
    n = acc.n
    rngs = [np.random.default_rng(s) for s in seeds]
    X = np.stack([rng.integers(0, 2, size=n, dtype=np.int64) for rng in rngs])
    H = d[None, :] + X @ W  # local fields: energy change of setting bit i is H[:, i]
    E = acc.offset + X @ d + ((X @ W) * X).sum(axis=1) // 2
    best_E = E.copy()
    best_X = X.copy()
    moves = 0

    for T in temperatures:
        u = np.stack([rng.random(n) for rng in rngs])
        for i in range(n):
            direction = 1 - 2 * X[:, i]
            delta = direction * H[:, i]
            accept = u[:, i] < np.exp(-np.maximum(delta, 0) / T)
            rows = np.nonzero(accept)[0]
            if rows.size:
                X[rows, i] += direction[rows]
                H[rows] += direction[rows, None] * W[i][None, :]
                E[rows] += delta[rows]
                improved = rows[E[rows] < best_E[rows]]
                if improved.size:
                    best_E[improved] = E[improved]
                    best_X[improved] = X[improved]
            moves += 1
            if debug_every and moves % debug_every == 0:
                full = acc.offset + X @ d + ((X @ W) * X).sum(axis=1) // 2
                if not np.array_equal(full, E):
                    raise RuntimeError(f"incremental energy drifted from full evaluation after {moves} moves")
                local = int((1 - 2 * X[0, i]) * H[0, i])
                if local != acc.flip_delta(X[0].tolist(), i):
                    raise RuntimeError(f"local field of bit {i} disagrees with the exact flip delta after {moves} moves")
    return best_E, best_X


def solve_sa(acc: QuboAccumulator, params: Optional[SaParams] = None) -> SolveResult:
    """Single-bit-flip Metropolis annealing with independent per-restart sub-seeds"""
    params = params or SaParams()
    if acc.n < 1:
        raise ParameterError("simulated annealing needs at least one variable")
    temperatures = temperature_schedule(acc, params)
    d, W = acc.to_symmetric()
    seeds = np.random.SeedSequence(params.seed).spawn(params.restarts)

    workers = min(params.workers, params.restarts)
    block = -(-params.restarts // workers)
    blocks = [seeds[i:i + block] for i in range(0, params.restarts, block)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda s: _anneal_block(acc, d, W, temperatures, s, params.debug_every), blocks))
    else:
        results = [_anneal_block(acc, d, W, temperatures, s, params.debug_every) for s in blocks]

    restart_E = np.concatenate([r[0] for r in results])
    restart_X = np.concatenate([r[1] for r in results])
    winner = int(np.argmin(restart_E))  # ties to the lowest restart index
    vector = [int(v) for v in restart_X[winner]]

    logger.info(f"SA finished: n={acc.n}, sweeps={params.sweeps}, restarts={params.restarts}, "
                f"best={int(restart_E[winner])}, seed={params.seed}")
    return _checked_result(
        acc, vector, int(restart_E[winner]),
        evaluations=params.sweeps * acc.n * params.restarts + params.restarts,
        restarts=params.restarts,
        seed=params.seed,
        method="sa",
        restart_energies=[int(e) for e in restart_E],
    )


def solve(acc: QuboAccumulator, method: str = "auto", limit: int = EXHAUSTIVE_LIMIT,
          params: Optional[SaParams] = None) -> SolveResult:
    """exhaustive, sa, or auto (exhaustive when n <= limit)"""
    if method == "exhaustive" or (method == "auto" and acc.n <= limit):
        return solve_exhaustive(acc, limit)
    if method in ("sa", "auto"):
        return solve_sa(acc, params)
    raise ParameterError(f"unknown method '{method}'")
