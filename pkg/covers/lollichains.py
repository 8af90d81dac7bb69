"""
Lollichain Generators
Anchored refined triad loops, one per class of essential triads at scales >= eps
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from chains.chain import Chain, chain_to_json
from config.constants import EMOJI_COMPLETE, EMOJI_WARNING
from config.enums import GroupKind
from config.run_config import SearchBudget
from covers.kernel import lollichain
from engine.abelian import H1Class
from engine.coset_enumeration import subgroup_index
from engine.homotopy import HomotopyEngine, loop_indices
from engine.smith import invariant_factors
from spectrum.critical import SpectrumReport, critical_spectrum
from spectrum.triads import Triad

logger = logging.getLogger(__name__)


@dataclass
class GeneratorReport:
    """Lollichains with their H1 classes and how far generation is certified"""
    scale: float
    kind: GroupKind
    generators: List[Chain] = field(default_factory=list)
    triads: List[Triad] = field(default_factory=list)
    classes: List[H1Class] = field(default_factory=list)
    h1_generates: bool = True
    generation_certified: bool = True

    def __len__(self) -> int:
        return len(self.generators)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scale': self.scale,
            'kind': self.kind.value,
            'generators': [chain_to_json(c) for c in self.generators],
            'triads': [t.to_dict() for t in self.triads],
            'classes': [c.to_list() for c in self.classes],
            'h1_generates': self.h1_generates,
            'generation_certified': self.generation_certified,
        }


def classes_generate(classes: List[H1Class], moduli: List[int]) -> bool:
    """Whether the classes span H1 = Z^r + torsion"""
    n = len(moduli)
    if n == 0:
        return True
    rows = [list(c.coordinates) for c in classes]
    rows += [[m if k == j else 0 for k in range(n)] for j, m in enumerate(moduli) if m > 0]
    factors = invariant_factors(rows, n)
    return len(factors) == n and all(f == 1 for f in factors)


def lollichain_generators(engine: HomotopyEngine, eps: float,
                          budget: Optional[SearchBudget] = None,
                          spectrum: Optional[SpectrumReport] = None) -> GeneratorReport:
    """
    One anchored lollichain per equivalence class of essential triads at scales >= eps

    A simply connected graph gives an empty list.
    """
    graph = engine.graph
    if spectrum is None:
        spectrum = critical_spectrum(engine, eps_min=eps, eps_max=graph.diameter, budget=budget)
    group = engine.group(eps)
    report = GeneratorReport(scale=eps, kind=group.kind)
    for entry in sorted(spectrum.entries, key=lambda e: e.value):
        for t in entry.representatives:
            chain = lollichain(graph, engine.basepoint, t, eps)
            report.generators.append(chain)
            report.triads.append(t)
            report.classes.append(group.abelian.class_of(group.word(loop_indices(chain, engine.net))))

    report.h1_generates = classes_generate(report.classes, list(group.abelian.moduli))
    if not report.h1_generates:
        report.generation_certified = False
    elif group.kind in (GroupKind.ABELIAN, GroupKind.TRIVIAL):
        report.generation_certified = True
    else:
        words = [group.word(loop_indices(c, engine.net)) for c in report.generators]
        report.generation_certified = subgroup_index(group.simplified, words) == 1
    if not report.generation_certified:
        logger.warning(f"{EMOJI_WARNING} generation at {eps:.6g} not certified (group kind {group.kind.value})")
    logger.info(f"{EMOJI_COMPLETE} {len(report)} lollichain generators at {eps:.6g}")
    return report
