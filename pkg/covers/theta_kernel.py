"""
Theta Kernel Check
Compares the kernel of H1(eps) -> H1(delta) with the subgroup of the kernel triads' classes
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

from config.constants import EMOJI_COMPLETE, EMOJI_INCOMPLETE
from config.errors import DomainError
from covers.kernel import KernelSpec
from engine.homotopy import HomotopyEngine, loop_indices
from engine.smith import lattice_equal, left_kernel

logger = logging.getLogger(__name__)


@dataclass
class ThetaKernelReport:
    """Both subgroups as exponent lattices over the surviving generators at eps"""
    eps: float
    delta: float
    kernel_rows: List[List[int]] = field(default_factory=list)
    triad_rows: List[List[int]] = field(default_factory=list)
    rank_eps: int = 0
    rank_delta: int = 0
    equal: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'eps': self.eps,
            'delta': self.delta,
            'kernel_rows': self.kernel_rows,
            'triad_rows': self.triad_rows,
            'rank_eps': self.rank_eps,
            'rank_delta': self.rank_delta,
            'equal': self.equal,
        }


def theta_kernel_check(engine: HomotopyEngine, eps: float, delta: float, kernel: KernelSpec) -> ThetaKernelReport:
    """
    Kernel of the abelianized map between scales eps < delta versus the
    subgroup generated by the kernel triads' lollichains at eps

    Generators surviving simplification at eps are carried to delta by
    their net loops; the kernel is the left kernel of their delta classes
    stacked over the torsion relations at delta.
    """
    if delta <= eps:
        raise DomainError(f"theta kernel needs eps < delta, got {eps} and {delta}")
    small, large = engine.group(eps), engine.group(delta)
    alive = small.simplified.alive
    moduli = list(large.abelian.moduli)

    images = []
    for g in alive:
        indices = small.presentation.generator_loop(g)
        images.append(list(large.class_of_indices(indices).coordinates))
    torsion = [[m if k == j else 0 for k in range(len(moduli))] for j, m in enumerate(moduli) if m > 0]
    kernel_rows = [row[:len(alive)] for row in left_kernel(images + torsion, len(moduli))]

    relators = small.abelian.relator_rows
    triad_rows = [small.abelian.exponent_vector(w) for w in kernel.words(engine, eps)]
    equal = lattice_equal(kernel_rows + relators, triad_rows + relators, len(alive))
    report = ThetaKernelReport(
        eps=eps,
        delta=delta,
        kernel_rows=kernel_rows,
        triad_rows=triad_rows,
        rank_eps=small.abelian.rank,
        rank_delta=large.abelian.rank,
        equal=equal,
    )
    prefix = EMOJI_COMPLETE if equal else EMOJI_INCOMPLETE
    logger.info(f"{prefix} theta kernel {eps:.6g} -> {delta:.6g}: subgroups {'agree' if equal else 'differ'}")
    return report
