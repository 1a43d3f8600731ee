"""
Pipeline configuration constants
"""
# Exhaustive search
EXHAUSTIVE_LIMIT = 24
EXHAUSTIVE_CHUNK_BITS = 16  # 65536 vectors per numpy block

# Simulated annealing
SA_SWEEPS = 2000
SA_RESTARTS = 20
SA_FINAL_TEMPERATURE = 0.1

# Oracles
MAXSAT_ENUMERATION_LIMIT = 20  # pure enumeration up to here, branch-and-bound above
MAXSAT_LIMIT = 26
HC_ORACLE_LIMIT = 20

# Generators
GEN_MAX_RETRIES = 1000

# Scaling datasets
FIGURE1_K_RANGE = (2, 64)
FIGURE2_N_RANGE = (5, 40)
FIGURE3_N_RANGE = (5, 64)
FIGURE3_EDGE_FACTOR = 4

# Desk-scale experiments (clause-to-variable grid is ours, see generators)
EXPERIMENT_SAT_K_VALUES = [4, 6, 8, 10]
EXPERIMENT_SAT_INSTANCES = 30
EXPERIMENT_SAT_VARIABLES = [8, 10, 12, 14]
EXPERIMENT_SAT_CLAUSES = [4, 5, 6, 7, 8]
EXPERIMENT_HC_INSTANCES = 100
EXPERIMENT_HC_VERTICES = [4, 5, 6, 7, 8]
EXPERIMENT_HC_DENSITIES = [1.0, 1.5, 2.0, 3.0]  # |E| / |V|, clipped to the complete graph
EXPERIMENT_HC_RESTARTS = 50
EXPERIMENT_SAT_MIN_SUCCESS = 29 / 30
EXPERIMENT_HC_MIN_SUCCESS = 0.98
