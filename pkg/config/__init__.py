"""
Configuration package
"""

from .errors import (
    DomainError,
    GraphParseError,
    SnapError,
    PremiseError,
    UnresolvedVerdictError,
)
from .run_config import SearchBudget, GraphSpec, RunConfig, ExperimentConfig

__all__ = [
    'DomainError', 'GraphParseError', 'SnapError', 'PremiseError',
    'UnresolvedVerdictError', 'SearchBudget', 'GraphSpec', 'RunConfig',
    'ExperimentConfig',
]
