"""
Error types
Every domain failure is a ValueError subclass so callers can catch it uniformly
"""

from typing import Optional


class DomainError(ValueError):
    """Bad parameters, points off the graph, mismatched chains, violated preconditions"""


class GraphParseError(DomainError):
    """Malformed graph text; carries the offending line number"""

    def __init__(self, line_number: int, message: str):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class SnapError(DomainError):
    """Snapping a chain to the net would move a point by at least half its gap excess"""


class PremiseError(DomainError):
    """A sigma-isometry premise fails; the message names the inequality"""

    def __init__(self, inequality: str, message: Optional[str] = None):
        self.inequality = inequality
        super().__init__(message or f"premise violated: {inequality}")


class UnresolvedVerdictError(RuntimeError):
    """An Unknown verdict blocks a result that must not be guessed"""

    def __init__(self, diagnostic: str):
        self.diagnostic = diagnostic
        super().__init__(diagnostic)
