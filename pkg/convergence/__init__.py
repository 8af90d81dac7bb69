"""
Convergence package
"""

from .gh import distortion, gh_bounds, gh_distance_exact
from .sigma_isometry import (
    DistortionPolynomial,
    PIsometryReport,
    SigmaIsometry,
    check_p_isometry,
    induced_map,
    map_ball_nodes,
    premises,
    refine_for_map,
    scaling_sigma_isometry,
)
from .experiment import ConvergenceExperiment, family_limit, family_member, run_convergence_experiment
from .hawaiian import hawaiian_valency_demo

__all__ = [
    'distortion', 'gh_bounds', 'gh_distance_exact',
    'DistortionPolynomial', 'PIsometryReport', 'SigmaIsometry', 'check_p_isometry',
    'induced_map', 'map_ball_nodes', 'premises', 'refine_for_map', 'scaling_sigma_isometry',
    'ConvergenceExperiment', 'family_limit', 'family_member', 'run_convergence_experiment',
    'hawaiian_valency_demo',
]
