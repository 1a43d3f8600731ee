"""
(Max) k-SAT to QUBO compilation with logarithmic clause ancillas

A clause of length k >= 4 gets h = ceil(log2(k + 1)) ancillas that must binary
encode the number of satisfied literals; the clause then recurses on the
all-positive clause over those ancillas until a 2- or 3-literal anchor.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .errors import DomainError, StructuralError
from .logging import setup_logger
from .models import Clause, Formula, Literal
from .qubo import AffineExpr, ClauseAncilla, ProblemVar, QuboAccumulator, VariableRegistry

logger = setup_logger("sat")


def counter_width(k: int) -> int:
    """ceil(log2(k + 1)) without floating point"""
    return int(k).bit_length()


def r(k: int) -> int:
    """Ancillas per k-literal clause"""
    if k < 2:
        raise DomainError(f"r(k) is defined for k >= 2, got {k}")
    if k == 2:
        return 0
    if k == 3:
        return 1
    h = counter_width(k)
    return h + r(h)


def ancilla_levels(k: int) -> List[int]:
    """Per-recursion-level ancilla counts, e.g. 8 -> [4, 3, 1]"""
    if k <= 2:
        return []
    if k == 3:
        return [1]
    h = counter_width(k)
    return [h] + ancilla_levels(h)


def clause_ancilla_count(k: int) -> int:
    """r(k), extended with 0 for unit clauses"""
    return 0 if k == 1 else r(k)


def uniform_dimension(num_vars: int, num_clauses: int, k: int) -> int:
    """|X| + |f| * r(k) for a uniform k-SAT formula"""
    return num_vars + num_clauses * r(k)


def predicted_dimension(f: Formula) -> int:
    return len(f.variables) + sum(clause_ancilla_count(len(c)) for c in f.clauses)


def unsat_count(f: Formula, assignment: Dict[int, int]) -> int:
    return sum(1 for clause in f.clauses if not clause.is_satisfied(assignment))


def literal_expr(registry: VariableRegistry, lit: Literal) -> AffineExpr:
    """x for a positive literal, 1 - x for a negated one"""
    idx = registry.index_of(ProblemVar(lit.variable))
    return AffineExpr(int(lit.negated), [(idx, lit.sign)])


@dataclass
class SatCompilation:
    accumulator: QuboAccumulator
    registry: VariableRegistry
    formula: Formula
    clause_ancillas: List[List[List[int]]] = field(default_factory=list)  # clause -> level -> ids

    @property
    def dimension(self) -> int:
        return self.accumulator.n


class SatCompiler:
    """Fills one accumulator clause by clause; ancilla ids are allocated sequentially"""

    def __init__(self, registry: VariableRegistry, acc: QuboAccumulator):
        self.registry = registry
        self.acc = acc
        self._used_ancillas: set = set()

    def new_ancilla(self, clause_id: int, level: int, bit: int) -> int:
        idx = self.registry.add(ClauseAncilla(clause_id, level, bit))
        self.acc.extend(1)
        return idx

    def _claim(self, ancilla: int, values: Sequence[AffineExpr]) -> None:
        if ancilla in self._used_ancillas or any(ancilla in v.terms for v in values):
            raise StructuralError(f"ancilla {ancilla} is already in use")
        self._used_ancillas.add(ancilla)

    def unit_gadget(self, values: Sequence[AffineExpr]) -> None:
        if len(values) != 1:
            raise StructuralError(f"unit gadget needs 1 literal, got {len(values)}")
        self.acc.add_linear(1 - values[0])

    def or_gadget(self, values: Sequence[AffineExpr]) -> None:
        """(1 - v1)(1 - v2): 0 when satisfied, 1 otherwise"""
        if len(values) != 2:
            raise StructuralError(f"OR gadget needs 2 literals, got {len(values)}")
        self.acc.add_bilinear(1 - values[0], 1 - values[1], 1)

    def threesat_gadget(self, values: Sequence[AffineExpr], ancilla: int) -> None:
        """1 - S + sum_{i<j} v_i v_j + w (2 - S); min over w is 0 iff satisfied, else 1"""
        if len(values) != 3:
            raise StructuralError(f"3-SAT gadget needs 3 literals, got {len(values)}")
        self._claim(ancilla, values)
        total = values[0] + values[1] + values[2]
        self.acc.add_linear(1 - total)
        for i in range(3):
            for j in range(i + 1, 3):
                self.acc.add_bilinear(values[i], values[j], 1)
        self.acc.add_bilinear(AffineExpr.var(ancilla), 2 - total, 1)

    def count_penalty(self, values: Sequence[AffineExpr], ancillas: Sequence[int]) -> None:
        """(sum v_i - sum_j 2^(j-1) A_j)^2: zero iff the ancillas encode the satisfied count"""
        h = counter_width(len(values))
        if len(ancillas) != h:
            raise StructuralError(f"clause of length {len(values)} needs {h} counting ancillas, got {len(ancillas)}")
        for a in ancillas:
            self._claim(a, values)
        residual = AffineExpr(0)
        for v in values:
            residual = residual + v
        self.acc.add_squared(residual - AffineExpr.binary(list(ancillas)))

    def implement_clause(self, values: Sequence[AffineExpr], clause_id: int,
                         level: int = 1, levels: Optional[List[List[int]]] = None) -> List[List[int]]:
        """Compile one clause recursively; returns the ancilla ids per level"""
        levels = [] if levels is None else levels
        k = len(values)
        if k == 0:
            raise StructuralError(f"clause {clause_id} is empty")
        if k == 1:
            self.unit_gadget(values)
        elif k == 2:
            self.or_gadget(values)
        elif k == 3:
            ancilla = self.new_ancilla(clause_id, level, 0)
            levels.append([ancilla])
            self.threesat_gadget(values, ancilla)
        else:
            h = counter_width(k)
            ancillas = [self.new_ancilla(clause_id, level, bit) for bit in range(h)]
            levels.append(ancillas)
            self.count_penalty(values, ancillas)
            self.implement_clause([AffineExpr.var(a) for a in ancillas], clause_id, level + 1, levels)
        return levels


def compile_formula(f: Formula) -> SatCompilation:
    """Build the QUBO; minimum over ancillas equals the number of unsatisfied clauses"""
    if not f.clauses:
        raise StructuralError("formula has no clauses")

    registry = VariableRegistry(ProblemVar(v) for v in f.variables)
    acc = QuboAccumulator(len(registry))
    compiler = SatCompiler(registry, acc)

    clause_ancillas = []
    for clause_id, clause in enumerate(f.clauses):
        if len(clause) == 0:
            raise StructuralError(f"clause {clause_id} is empty")
        values = [literal_expr(registry, lit) for lit in clause.literals]
        clause_ancillas.append(compiler.implement_clause(values, clause_id))

    predicted = predicted_dimension(f)
    if acc.n != predicted:
        raise RuntimeError(f"dimension {acc.n} differs from predicted |X| + sum r(k) = {predicted}")

    logger.info(f"Compiled formula: {len(f.variables)} variables, {len(f.clauses)} clauses, "
                f"n={acc.n}, entries={len(acc.entries)}, offset={acc.offset}")
    return SatCompilation(acc, registry, f, clause_ancillas)


def decode(sol: Sequence[int], comp: SatCompilation) -> Dict[int, int]:
    """Truth assignment read from the problem-variable prefix"""
    if len(sol) != comp.dimension:
        raise StructuralError(f"solution length {len(sol)} does not match dimension {comp.dimension}")
    return {label.name: int(sol[i]) for i, label in enumerate(comp.registry.problem_prefix())}


def _set_ancillas(x: List[int], values: List[int], levels: List[List[int]]) -> None:
    """Assign one level's ancillas their minimizing values given the literal values"""
    if not levels:
        return
    ids = levels[0]
    satisfied = sum(values)
    if len(values) == 3:
        x[ids[0]] = 1 if satisfied == 3 else 0
        return
    bits = [(satisfied >> j) & 1 for j in range(len(ids))]
    for idx, bit in zip(ids, bits):
        x[idx] = bit
    _set_ancillas(x, bits, levels[1:])


def encode(assignment: Dict[int, int], comp: SatCompilation) -> List[int]:
    """Full vector for a problem assignment with ancillas at a minimizing state"""
    x = [0] * comp.dimension
    for i, label in enumerate(comp.registry.problem_prefix()):
        x[i] = int(assignment[label.name])
    for clause, levels in zip(comp.formula.clauses, comp.clause_ancillas):
        values = [int(lit.holds(assignment[lit.variable])) for lit in clause.literals]
        _set_ancillas(x, values, levels)
    return x
