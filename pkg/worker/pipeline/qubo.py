"""
Exact-integer QUBO construction, energy evaluation and the text file format

Energy convention: H(x) = offset + sum_{i <= j} Q[i, j] * x_i * x_j with only
upper-triangular keys stored.
"""
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ParseError, StructuralError
from .logging import setup_logger

logger = setup_logger("qubo")


# Variable labels
class ProblemVar(NamedTuple):
    name: Union[int, str]


class ClauseAncilla(NamedTuple):
    clause: int
    level: int
    bit: int


class EdgeBit(NamedTuple):
    edge: Tuple[int, int]
    bit: int


class PositionVar(NamedTuple):
    vertex: int
    slot: int


Label = Union[ProblemVar, ClauseAncilla, EdgeBit, PositionVar]


def format_label(label: Label) -> str:
    if isinstance(label, ProblemVar):
        return f"x:{label.name}"
    if isinstance(label, ClauseAncilla):
        return f"a:{label.clause}:{label.level}:{label.bit}"
    if isinstance(label, EdgeBit):
        return f"e:{label.edge[0]}-{label.edge[1]}:{label.bit}"
    if isinstance(label, PositionVar):
        return f"p:{label.vertex}:{label.slot}"
    raise StructuralError(f"unknown label type {type(label).__name__}")


def parse_label(text: str) -> Label:
    """Inverse of format_label; raises ValueError on malformed text"""
    kind, _, rest = text.partition(":")
    if kind == "x" and rest:
        return ProblemVar(int(rest) if rest.lstrip("-").isdigit() else rest)
    parts = rest.split(":")
    if kind == "a" and len(parts) == 3:
        return ClauseAncilla(*(int(p) for p in parts))
    if kind == "e" and len(parts) == 2:
        a, b = parts[0].split("-")
        return EdgeBit((int(a), int(b)), int(parts[1]))
    if kind == "p" and len(parts) == 2:
        return PositionVar(int(parts[0]), int(parts[1]))
    raise ValueError(f"malformed label '{text}'")


class VariableRegistry:
    """Dense 0-based variable ids with labels; problem variables form a prefix"""

    def __init__(self, labels: Optional[Iterable[Label]] = None):
        self._labels: List[Label] = []
        self._index: Dict[Label, int] = {}
        for label in labels or []:
            self.add(label)

    def add(self, label: Label) -> int:
        if label in self._index:
            raise StructuralError(f"variable {format_label(label)} already registered")
        if isinstance(label, ProblemVar) and self.problem_count != len(self._labels):
            raise StructuralError("problem variables must be registered before any ancilla")
        self._index[label] = len(self._labels)
        self._labels.append(label)
        return self._index[label]

    def index_of(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise StructuralError(f"unregistered variable {format_label(label)}") from None

    def __contains__(self, label: Label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self._labels)

    @property
    def labels(self) -> List[Label]:
        return list(self._labels)

    @property
    def problem_count(self) -> int:
        count = 0
        for label in self._labels:
            if not isinstance(label, ProblemVar):
                break
            count += 1
        return count

    def problem_prefix(self) -> List[Label]:
        return self._labels[:self.problem_count]


class AffineExpr:
    """Integer affine expression constant + sum(coeff * x_id) with merged terms"""

    __slots__ = ("constant", "terms")

    def __init__(self, constant: int = 0, terms: Optional[Iterable[Tuple[int, int]]] = None):
        self.constant = int(constant)
        self.terms: Dict[int, int] = {}
        for var, coeff in terms or []:
            if var < 0:
                raise StructuralError(f"negative variable id {var}")
            merged = self.terms.get(var, 0) + int(coeff)
            if merged:
                self.terms[var] = merged
            else:
                self.terms.pop(var, None)

    @classmethod
    def var(cls, var: int, coeff: int = 1) -> "AffineExpr":
        return cls(0, [(var, coeff)])

    @classmethod
    def binary(cls, variables: Sequence[int], weights: Optional[Sequence[int]] = None) -> "AffineExpr":
        """sum 2^(j) * x_j, or the given weights"""
        if weights is None:
            weights = [1 << j for j in range(len(variables))]
        return cls(0, zip(variables, weights))

    def __add__(self, other: Union["AffineExpr", int]) -> "AffineExpr":
        if isinstance(other, int):
            return AffineExpr(self.constant + other, self.terms.items())
        return AffineExpr(self.constant + other.constant,
                          list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self) -> "AffineExpr":
        return self * -1

    def __sub__(self, other: Union["AffineExpr", int]) -> "AffineExpr":
        return self + (-other)

    def __rsub__(self, other: int) -> "AffineExpr":
        return (-self) + other

    def __mul__(self, factor: int) -> "AffineExpr":
        return AffineExpr(self.constant * factor, [(v, c * factor) for v, c in self.terms.items()])

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, AffineExpr)
                and self.constant == other.constant and self.terms == other.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*x{v}" for v, c in sorted(self.terms.items()))
        return f"AffineExpr({self.constant}{' + ' + body if body else ''})"

    def evaluate(self, x: Sequence[int]) -> int:
        return self.constant + sum(c * int(x[v]) for v, c in self.terms.items())


class QuboAccumulator:
    """Growable upper-triangular integer QUBO plus constant offset"""

    def __init__(self, n: int = 0):
        self.n = n
        self.offset = 0
        self._entries: Dict[Tuple[int, int], int] = {}

    def extend(self, count: int = 1) -> int:
        """Append count variables, return the first new id"""
        first = self.n
        self.n += count
        return first

    def _check(self, *ids: int) -> None:
        for i in ids:
            if not 0 <= i < self.n:
                raise StructuralError(f"unknown variable id {i} (n={self.n})")

    def _add(self, i: int, j: int, coeff: int) -> None:
        if not coeff:
            return
        key = (i, j) if i <= j else (j, i)
        value = self._entries.get(key, 0) + coeff
        if value:
            self._entries[key] = value
        else:
            del self._entries[key]

    @property
    def entries(self) -> Dict[Tuple[int, int], int]:
        return dict(self._entries)

    def get(self, i: int, j: int) -> int:
        return self._entries.get((min(i, j), max(i, j)), 0)

    def add_entry(self, i: int, j: int, coeff: int) -> "QuboAccumulator":
        self._check(i, j)
        self._add(i, j, int(coeff))
        return self

    def add_linear(self, e: AffineExpr, coeff: int = 1) -> "QuboAccumulator":
        """Add coeff * e (linear terms go to the diagonal since x^2 = x)"""
        self._check(*e.terms)
        for i, a in e.terms.items():
            self._add(i, i, coeff * a)
        self.offset += coeff * e.constant
        return self

    def add_squared(self, e: AffineExpr, weight: int = 1) -> "QuboAccumulator":
        """Add weight * e^2 expanded with x_i^2 = x_i"""
        self._check(*e.terms)
        c = e.constant
        items = sorted(e.terms.items())
        for idx, (i, a) in enumerate(items):
            self._add(i, i, weight * (a * a + 2 * c * a))
            for j, b in items[idx + 1:]:
                self._add(i, j, weight * 2 * a * b)
        self.offset += weight * c * c
        return self

    def add_bilinear(self, e1: AffineExpr, e2: AffineExpr, coeff: int) -> "QuboAccumulator":
        """Add coeff * e1 * e2"""
        self._check(*e1.terms, *e2.terms)
        for i, a in e1.terms.items():
            for j, b in e2.terms.items():
                self._add(i, j, coeff * a * b)
            self._add(i, i, coeff * a * e2.constant)
        for j, b in e2.terms.items():
            self._add(j, j, coeff * b * e1.constant)
        self.offset += coeff * e1.constant * e2.constant
        return self

    def energy(self, x: Sequence[int]) -> int:
        if len(x) != self.n:
            raise StructuralError(f"vector length {len(x)} does not match n={self.n}")
        total = self.offset
        for (i, j), q in self._entries.items():
            if x[i] and x[j]:
                total += q
        return total

    def flip_delta(self, x: Sequence[int], i: int) -> int:
        """Energy change when bit i of x flips"""
        self._check(i)
        field = self._entries.get((i, i), 0)
        for (a, b), q in self._entries.items():
            if a == i and b != i and x[b]:
                field += q
            elif b == i and a != i and x[a]:
                field += q
        return field if not x[i] else -field

    def max_abs_coefficient(self) -> int:
        return max((abs(q) for q in self._entries.values()), default=0)

    def to_dense(self) -> np.ndarray:
        """Upper-triangular int64 matrix (offset not included)"""
        Q = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), q in self._entries.items():
            Q[i, j] = q
        return Q

    def to_symmetric(self) -> Tuple[np.ndarray, np.ndarray]:
        """(diagonal, W) with W symmetric, zero diagonal: H = offset + d.x + x.W.x / 2"""
        Q = self.to_dense()
        d = np.diag(Q).copy()
        W = np.triu(Q, 1)
        return d, W + W.T


def serialize(acc: QuboAccumulator, registry: VariableRegistry) -> bytes:
    """Text format: header, sorted entries, variable labels, clause mapping section"""
    if len(registry) != acc.n:
        raise StructuralError(f"registry has {len(registry)} labels but accumulator n={acc.n}")
    entries = sorted(acc.entries.items())
    lines = [f"qubo {acc.n} {acc.offset} {len(entries)}"]
    lines.extend(f"{i} {j} {q}" for (i, j), q in entries)
    lines.extend(f"var {idx} {format_label(label)}" for idx, label in enumerate(registry.labels))
    lines.extend(clause_mapping_lines(registry))
    return ("\n".join(lines) + "\n").encode("utf-8")


def clause_mapping_lines(registry: VariableRegistry) -> List[str]:
    """`clause <id> <level> <ids...>` per clause per recursion level"""
    groups: Dict[Tuple[int, int], List[int]] = {}
    for idx, label in enumerate(registry.labels):
        if isinstance(label, ClauseAncilla):
            groups.setdefault((label.clause, label.level), []).append(idx)
    return [f"clause {c} {level} {' '.join(map(str, ids))}" for (c, level), ids in sorted(groups.items())]


def _int(token: str, line: int, field: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected integer, got '{token}'", line=line, field=field) from None


def deserialize(data: Union[bytes, str]) -> Tuple[QuboAccumulator, VariableRegistry]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = [(no, raw.split()) for no, raw in enumerate(text.splitlines(), start=1) if raw.strip()]
    if not lines:
        raise ParseError("empty input", line=1, field="header")

    no, header = lines[0]
    if len(header) != 4 or header[0] != "qubo":
        raise ParseError("header must be 'qubo <n> <offset> <entry-count>'", line=no, field="header")
    n = _int(header[1], no, "n")
    offset = _int(header[2], no, "offset")
    count = _int(header[3], no, "entry-count")
    if n < 0 or count < 0:
        raise ParseError("negative size", line=no, field="header")

    acc = QuboAccumulator(n)
    acc.offset = offset
    body = lines[1:]
    if len(body) < count + n:
        raise ParseError(f"expected {count} entries and {n} variables", line=no, field="entry-count")

    seen = set()
    for no, tokens in body[:count]:
        if len(tokens) != 3:
            raise ParseError("entry must be 'i j coeff'", line=no, field="entry")
        i, j, q = (_int(t, no, f) for t, f in zip(tokens, ("i", "j", "coeff")))
        if i > j:
            raise ParseError(f"entry ({i}, {j}) is below the diagonal", line=no, field="j")
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"entry ({i}, {j}) outside 0..{n - 1}", line=no, field="i")
        if (i, j) in seen:
            raise ParseError(f"duplicate entry ({i}, {j})", line=no, field="entry")
        if q == 0:
            raise ParseError(f"entry ({i}, {j}) has coefficient 0", line=no, field="coeff")
        seen.add((i, j))
        acc.add_entry(i, j, q)

    registry = VariableRegistry()
    for expected, (no, tokens) in enumerate(body[count:count + n]):
        if len(tokens) != 3 or tokens[0] != "var":
            raise ParseError("variable line must be 'var <index> <label>'", line=no, field="var")
        if _int(tokens[1], no, "index") != expected:
            raise ParseError(f"variable index must be {expected}", line=no, field="index")
        try:
            registry.add(parse_label(tokens[2]))
        except (ValueError, StructuralError) as e:
            raise ParseError(str(e), line=no, field="label") from None

    expected_mapping = clause_mapping_lines(registry)
    mapping = [(no, " ".join(tokens)) for no, tokens in body[count + n:]]
    for idx, (no, line) in enumerate(mapping):
        if not line.startswith("clause "):
            raise ParseError("unexpected trailing line", line=no, field="section")
        if idx >= len(expected_mapping) or expected_mapping[idx] != line:
            raise ParseError("clause mapping disagrees with ancilla labels", line=no, field="clause")

    logger.debug(f"Deserialized QUBO: n={n}, entries={count}, offset={offset}")
    return acc, registry
