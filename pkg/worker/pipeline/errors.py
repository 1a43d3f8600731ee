"""
Error types shared by the compilers, solvers, oracles and the CLI
"""
from typing import Optional


class QuboCompileError(Exception):
    """Base class for every error raised by the pipeline"""


class StructuralError(QuboCompileError, ValueError):
    """Unknown variable ids, wrong clause arity, reused ancillas, length mismatches"""


class DomainError(StructuralError):
    """Argument outside the domain of an operation (r(k) with k < 2, |V| < 3)"""


class ParseError(StructuralError):
    """Malformed input file; carries the 1-based line and the offending field"""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class ParameterError(QuboCompileError, ValueError):
    """Invalid solver parameters"""


class CapacityError(QuboCompileError, RuntimeError):
    """Instance too large for an exhaustive method"""


class GenerationError(QuboCompileError, RuntimeError):
    """Instance generator could not satisfy its request"""


class VerificationError(QuboCompileError):
    """A decoded solution failed validation; message names the first failed check"""

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        super().__init__(f"{check}: {detail}" if detail else check)
