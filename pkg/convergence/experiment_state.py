"""
State definitions for the convergence experiment graph
Provides the TypedDict carried between LangGraph nodes and its initial value
"""

from typing import Any, Dict, List, Optional
from typing_extensions import TypedDict

from config.constants import STATUS_PENDING
from config.run_config import ExperimentConfig


class LegResult(TypedDict):
    """
    One member of the sequence, reduced to what later nodes need
    """
    index: int
    scale: float
    resolution: float
    sigma: float
    m: float
    b: float
    deck_rank: int
    deck_torsion: List[int]
    ball_size: int
    window_values: List[float]
    window_triads: List[Dict[str, Any]]
    p_check: Optional[Dict[str, Any]]


class LimitResult(TypedDict):
    """
    The limit space's ball at one scale
    """
    target: str
    scale: float
    kernel_triads: List[Dict[str, Any]]
    deck_rank: int
    deck_torsion: List[int]
    ball_size: int


class ComparisonRow(TypedDict):
    """
    One CSV row: the i-th ball against one limit ball
    """
    i: int
    target: str
    scale: float
    gh_lower: float
    gh_upper: float
    map_distortion: Optional[float]
    deck_rank: int
    deck_torsion: List[int]
    error: float


class ExperimentState(TypedDict):
    """
    State for the convergence experiment graph
    """
    # Input
    config: Dict[str, Any]

    # Progress
    current_step: str
    status: str

    # Results per node
    legs: List[LegResult]
    limits: List[LimitResult]
    rows: List[ComparisonRow]
    thresholds: Dict[str, Optional[int]]
    report: Dict[str, Any]

    # Errors
    has_errors: bool
    errors: List[str]


def create_initial_state(config: ExperimentConfig) -> Dict[str, Any]:
    """
    Create the initial state for one experiment run

    Args:
        config: Validated experiment configuration

    Returns:
        Dictionary containing initial state
    """
    return {
        'config': config.to_dict(),
        'current_step': 'init',
        'status': STATUS_PENDING,
        'legs': [],
        'limits': [],
        'rows': [],
        'thresholds': {},
        'report': {},
        'has_errors': False,
        'errors': [],
    }
