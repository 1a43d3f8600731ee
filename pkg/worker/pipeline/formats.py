"""
Instance and artifact file formats: DIMACS CNF, hc graph files, QUBO files, solution vectors
"""
from pathlib import Path
from typing import List, Tuple, Union

from pydantic import ValidationError

from .errors import ParseError
from .logging import setup_logger
from .models import Formula, Graph
from .qubo import QuboAccumulator, VariableRegistry, deserialize, serialize

logger = setup_logger("formats")

PathLike = Union[str, Path]


def _read_text(path: PathLike) -> str:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"file not found: {path}")
    return path.read_text(encoding="utf-8")


def _int(token: str, line: int, field: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected integer, got '{token}'", line=line, field=field) from None


def parse_dimacs(text: str) -> Formula:
    """`p cnf <vars> <clauses>` then 0-terminated clauses, possibly spanning lines"""
    header = None
    clauses: List[List[int]] = []
    current: List[int] = []
    last_line = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        last_line = no
        tokens = line.split()
        if tokens[0] == "p":
            if header is not None:
                raise ParseError("second problem line", line=no, field="header")
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise ParseError("header must be 'p cnf <vars> <clauses>'", line=no, field="header")
            header = (_int(tokens[2], no, "vars"), _int(tokens[3], no, "clauses"))
            if header[0] < 0 or header[1] < 0:
                raise ParseError("negative count in header", line=no, field="header")
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' header", line=no, field="header")
        for token in tokens:
            value = _int(token, no, "literal")
            if value == 0:
                clauses.append(current)
                current = []
            elif abs(value) > header[0]:
                raise ParseError(f"literal {value} exceeds declared {header[0]} variables", line=no, field="literal")
            else:
                current.append(value)
    if header is None:
        raise ParseError("missing 'p cnf' header", line=1, field="header")
    if current:
        raise ParseError("last clause is not terminated by 0", line=last_line, field="literal")
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}", line=last_line, field="clauses")
    return Formula.from_dimacs(header[0], clauses)


def format_dimacs(f: Formula, comment: str = "") -> str:
    lines = [f"c {comment}"] if comment else []
    num_vars = max(f.variables, default=0)
    lines.append(f"p cnf {num_vars} {len(f.clauses)}")
    lines.extend(" ".join(str(v) for v in clause + [0]) for clause in f.to_dimacs())
    return "\n".join(lines) + "\n"


def load_cnf(path: PathLike) -> Formula:
    return parse_dimacs(_read_text(path))


def dump_cnf(f: Formula, path: PathLike, comment: str = "") -> None:
    Path(path).write_text(format_dimacs(f, comment), encoding="utf-8")


def parse_graph(text: str) -> Tuple[Graph, bool]:
    """`p hc <|V|> <|E|> <directed|undirected>` then 1-based `<a> <b>` lines"""
    lines = [(no, raw.split()) for no, raw in enumerate(text.splitlines(), start=1)
             if raw.strip() and not raw.strip().startswith("c")]
    if not lines:
        raise ParseError("empty graph file", line=1, field="header")
    no, header = lines[0]
    if len(header) != 5 or header[:2] != ["p", "hc"] or header[4] not in ("directed", "undirected"):
        raise ParseError("header must be 'p hc <|V|> <|E|> <directed|undirected>'", line=no, field="header")
    n = _int(header[2], no, "|V|")
    m = _int(header[3], no, "|E|")
    directed = header[4] == "directed"
    if n < 1:
        raise ParseError("vertex count must be positive", line=no, field="|V|")
    if len(lines) - 1 != m:
        raise ParseError(f"header declares {m} edges, found {len(lines) - 1}", line=no, field="|E|")

    pairs: List[Tuple[int, int]] = []
    seen = set()
    for no, tokens in lines[1:]:
        if len(tokens) != 2:
            raise ParseError("edge line must be '<a> <b>'", line=no, field="edge")
        a, b = _int(tokens[0], no, "a"), _int(tokens[1], no, "b")
        for value, field in ((a, "a"), (b, "b")):
            if not 1 <= value <= n:
                raise ParseError(f"vertex {value} outside 1..{n}", line=no, field=field)
        if a == b:
            raise ParseError(f"self-loop at vertex {a}", line=no, field="edge")
        key = (a, b) if directed else (min(a, b), max(a, b))
        if key in seen:
            raise ParseError(f"duplicate edge ({a}, {b})", line=no, field="edge")
        seen.add(key)
        pairs.append((a - 1, b - 1))

    try:
        if directed:
            return Graph(vertex_count=n, edges=tuple(pairs)), directed
        return Graph.from_undirected(n, pairs), directed
    except ValidationError as e:
        raise ParseError(str(e), field="graph") from None


def format_graph(g: Graph) -> str:
    """Always written as directed edges (undirected inputs are already expanded)"""
    lines = [f"p hc {g.vertex_count} {len(g.edges)} directed"]
    lines.extend(f"{a + 1} {b + 1}" for a, b in g.edges)
    return "\n".join(lines) + "\n"


def load_graph(path: PathLike) -> Graph:
    graph, directed = parse_graph(_read_text(path))
    logger.debug(f"Loaded graph {path}: |V|={graph.vertex_count}, |E|={len(graph.edges)}, directed={directed}")
    return graph


def dump_graph(g: Graph, path: PathLike) -> None:
    Path(path).write_text(format_graph(g), encoding="utf-8")


def load_qubo(path: PathLike) -> Tuple[QuboAccumulator, VariableRegistry]:
    return deserialize(_read_text(path))


def dump_qubo(acc: QuboAccumulator, registry: VariableRegistry, path: PathLike) -> None:
    Path(path).write_bytes(serialize(acc, registry))


def parse_solution(text: str) -> List[int]:
    bits = []
    for no, raw in enumerate(text.splitlines(), start=1):
        for ch in raw:
            if ch in "01":
                bits.append(int(ch))
            elif not ch.isspace():
                raise ParseError(f"unexpected character '{ch}' in solution", line=no, field="bit")
    return bits


def format_solution(vector: List[int]) -> str:
    return "".join(str(int(b)) for b in vector) + "\n"


def load_solution(path: PathLike) -> List[int]:
    return parse_solution(_read_text(path))


def dump_solution(vector: List[int], path: PathLike) -> None:
    Path(path).write_text(format_solution(vector), encoding="utf-8")
