from typing import Any, Optional


class RelsimpError(Exception):
    """Base class; ``kind`` is the tag printed in the CLI error prefix."""

    kind = "error"


class ProgramSyntaxError(RelsimpError, ValueError):
    kind = "parse"

    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = ""):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        super().__init__(str(self))

    def __str__(self):
        where = f"{self.source}:" if self.source else ""
        return f"{where}{self.line}:{self.col}: {self.message}"


class UniverseError(RelsimpError, ValueError):
    kind = "config"


class EnumerationLimitError(RelsimpError, ValueError):
    kind = "bounds"


class NotSimplifiableError(RelsimpError, ValueError):
    kind = "not-simplifiable"

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class ForgettingImpossibleError(RelsimpError, ValueError):
    kind = "omega"

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class VerificationError(RelsimpError, AssertionError):
    kind = "verification"
