"""
Kernel Specifications
Triads anchored at the basepoint; their lollichains generate the kernel of a circle cover
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

from chains.chain import Chain, concat, geodesic_chain, refine_to_scale, reverse
from config.constants import TOLERANCE
from config.errors import DomainError
from engine.homotopy import HomotopyEngine, loop_indices
from engine.words import Word
from geometry.metric_graph import GraphPoint, MetricGraph
from spectrum.triads import Triad, triad_from_points

logger = logging.getLogger(__name__)


def triad_loop_at(graph: MetricGraph, t: Triad, eps: float) -> Chain:
    """The refined triad loop as an eps-chain: subdivided when eps <= side, reread otherwise"""
    loop = t.loop(graph)
    if eps <= t.side + TOLERANCE:
        return refine_to_scale(loop, eps)
    return loop.at_scale(eps)


def lollichain(graph: MetricGraph, basepoint: GraphPoint, t: Triad, eps: float) -> Chain:
    """alpha * T' * reverse(alpha), alpha the subdivided geodesic from basepoint to the triad"""
    circle = triad_loop_at(graph, t, eps)
    anchor = geodesic_chain(graph, basepoint, circle.first, eps)
    return concat(concat(anchor, circle), reverse(anchor))


@dataclass
class KernelSpec:
    """Triads whose anchored lollichains generate the kernel subgroup at scale eps"""
    triads: List[Triad] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.triads)

    def lollichains(self, graph: MetricGraph, basepoint: GraphPoint, eps: float) -> List[Chain]:
        return [lollichain(graph, basepoint, t, eps) for t in self.triads]

    def words(self, engine: HomotopyEngine, eps: float) -> List[Word]:
        """Presentation words of the lollichains at eps"""
        group = engine.group(eps)
        return [group.word(loop_indices(c, engine.net))
                for c in self.lollichains(engine.graph, engine.basepoint, eps)]

    def to_dict(self) -> Dict[str, Any]:
        return {'triads': [t.to_dict() for t in self.triads]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any], graph: MetricGraph) -> 'KernelSpec':
        """Read {'triads': [{'points': [[edge, offset], x3], 'eta': ...}, ...]}"""
        try:
            triads = []
            for entry in data.get('triads', []):
                points = [graph.point(int(e), float(o)) for e, o in entry['points']]
                triads.append(triad_from_points(graph, points, float(entry.get('eta', 0.0))))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, DomainError):
                raise
            raise DomainError(f"malformed triad file: {e}") from e
        return cls(triads)

    @classmethod
    def from_points(cls, graph: MetricGraph, triples: Sequence[Sequence[GraphPoint]],
                    eta: float = 0.0) -> 'KernelSpec':
        return cls([triad_from_points(graph, t, eta) for t in triples])
