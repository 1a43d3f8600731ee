"""
Pydantic models for problem instances, solver parameters and results
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from .config import SA_FINAL_TEMPERATURE, SA_RESTARTS, SA_SWEEPS


class Literal(BaseModel):
    """Possibly negated Boolean variable"""
    model_config = {"frozen": True}

    variable: int = Field(..., ge=0, description="Variable name (DIMACS index)")
    negated: bool = False

    @property
    def sign(self) -> int:
        return -1 if self.negated else 1

    @classmethod
    def from_dimacs(cls, value: int) -> "Literal":
        if value == 0:
            raise ValueError("0 is the DIMACS clause terminator, not a literal")
        return cls(variable=abs(value), negated=value < 0)

    def to_dimacs(self) -> int:
        return -self.variable if self.negated else self.variable

    def holds(self, value: int) -> bool:
        """Truth value of the literal when its variable is set to value"""
        return bool(value) != self.negated

    def __str__(self) -> str:
        return f"¬x{self.variable}" if self.negated else f"x{self.variable}"


class Clause(BaseModel):
    """Disjunction of literals; duplicates and complementary pairs are kept as given"""
    model_config = {"frozen": True}

    literals: Tuple[Literal, ...] = ()

    @classmethod
    def of(cls, *values: int) -> "Clause":
        """Build from DIMACS-style signed integers"""
        return cls(literals=tuple(Literal.from_dimacs(v) for v in values))

    def __len__(self) -> int:
        return len(self.literals)

    def is_satisfied(self, assignment: dict) -> bool:
        return any(lit.holds(assignment[lit.variable]) for lit in self.literals)


class Formula(BaseModel):
    """CNF formula; variables keep their declaration order (it fixes the QUBO prefix)"""
    variables: List[int] = Field(default_factory=list)
    clauses: List[Clause] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_variables(self) -> "Formula":
        used = {lit.variable for clause in self.clauses for lit in clause.literals}
        if not self.variables:
            self.variables = sorted(used)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable in formula variable list")
        missing = used - set(self.variables)
        if missing:
            raise ValueError(f"clauses use undeclared variables: {sorted(missing)}")
        return self

    @classmethod
    def from_dimacs(cls, num_vars: int, clauses: List[List[int]]) -> "Formula":
        return cls(
            variables=list(range(1, num_vars + 1)),
            clauses=[Clause.of(*c) for c in clauses],
        )

    def to_dimacs(self) -> List[List[int]]:
        return [[lit.to_dimacs() for lit in clause.literals] for clause in self.clauses]


class Graph(BaseModel):
    """Directed graph on vertices 0..vertex_count-1; vertex 0 is the start vertex"""
    model_config = {"frozen": True}

    vertex_count: int = Field(..., ge=1)
    edges: Tuple[Tuple[int, int], ...] = ()

    @field_validator("edges")
    @classmethod
    def check_edges(cls, v: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
        seen = set()
        for a, b in v:
            if a == b:
                raise ValueError(f"self-loop at vertex {a}")
            if (a, b) in seen:
                raise ValueError(f"duplicate edge ({a}, {b})")
            seen.add((a, b))
        return v

    @model_validator(mode="after")
    def check_vertices(self) -> "Graph":
        for a, b in self.edges:
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise ValueError(f"edge ({a}, {b}) references a vertex outside 0..{self.vertex_count - 1}")
        return self

    @classmethod
    def from_undirected(cls, vertex_count: int, pairs: List[Tuple[int, int]]) -> "Graph":
        """Expand every undirected pair into both directions"""
        edges: List[Tuple[int, int]] = []
        seen = set()
        for a, b in pairs:
            for edge in ((a, b), (b, a)):
                if edge not in seen:
                    seen.add(edge)
                    edges.append(edge)
        return cls(vertex_count=vertex_count, edges=tuple(edges))

    @property
    def edge_set(self) -> set:
        return set(self.edges)

    def successors(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.vertex_count)]
        for a, b in self.edges:
            out[a].append(b)
        return out


class SaParams(BaseModel):
    """Simulated annealing parameters; identical params give identical results"""
    sweeps: int = Field(SA_SWEEPS, ge=1)
    t_initial: Optional[float] = Field(None, gt=0, description="None: max |coefficient|")
    t_final: float = Field(SA_FINAL_TEMPERATURE, gt=0)
    restarts: int = Field(SA_RESTARTS, ge=1)
    seed: int = Field(0, ge=0)
    workers: int = Field(1, ge=1)
    debug_every: int = Field(0, ge=0, description="Recheck incremental energy every k moves (0: off)")


class SolveResult(BaseModel):
    """Best vector found, its energy and solver statistics"""
    vector: List[int]
    energy: int
    evaluations: int
    restarts: int = 1
    seed: Optional[int] = None
    method: str
    restart_energies: List[int] = Field(default_factory=list)
