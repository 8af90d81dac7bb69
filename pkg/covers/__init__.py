"""
Covers package
"""

from .kernel import KernelSpec, lollichain, triad_loop_at
from .cover_ball import CoverBall, cover_ball, deck_action, quotient_group_invariants
from .lollichains import GeneratorReport, classes_generate, lollichain_generators
from .theta_kernel import ThetaKernelReport, theta_kernel_check

__all__ = [
    'KernelSpec', 'lollichain', 'triad_loop_at',
    'CoverBall', 'cover_ball', 'deck_action', 'quotient_group_invariants',
    'GeneratorReport', 'classes_generate', 'lollichain_generators',
    'ThetaKernelReport', 'theta_kernel_check',
]
