"""
Pipeline modules for QUBO compilation, solving, verification and instance generation
"""
