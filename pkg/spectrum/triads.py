"""
Triads
Near-equilateral net triples, their essentiality and free-homotopy equivalence
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from chains.chain import Chain, concat, geodesic_chain, refined_polygon, reverse
from config.constants import CONJUGATOR_SEARCH_LIMIT, TOLERANCE
from config.enums import Equivalence, GroupKind, VerdictKind
from config.errors import DomainError
from config.run_config import SearchBudget
from engine.abelian import H1Class
from engine.homotopy import HomotopyEngine, Verdict, loop_indices
from engine.words import Word, cyclic_canonical
from geometry.metric_graph import GraphPoint, MetricGraph, Net

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Triad:
    """Three net points with pairwise distances within eta of side"""
    points: Tuple[GraphPoint, GraphPoint, GraphPoint]
    side: float
    eta: float
    indices: Tuple[int, int, int] = (-1, -1, -1)

    def loop(self, graph: MetricGraph, scale: Optional[float] = None) -> Chain:
        """Midpoint refinement of the closed triangle, read at scale (default: side)"""
        return refined_polygon(graph, self.points, self.side if scale is None else scale)

    def rotated(self, k: int) -> 'Triad':
        k %= 3
        return Triad(self.points[k:] + self.points[:k], self.side, self.eta,
                     self.indices[k:] + self.indices[:k])

    def reflected(self) -> 'Triad':
        return Triad(self.points[::-1], self.side, self.eta, self.indices[::-1])

    @property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'points': [p.to_pair() for p in self.points],
            'side': self.side,
            'eta': self.eta,
        }


def triad_from_points(graph: MetricGraph, points: Sequence[GraphPoint], eta: float = 0.0) -> Triad:
    """Triad with side = largest pairwise distance"""
    if len(points) != 3:
        raise DomainError(f"a triad has three points, got {len(points)}")
    a, b, c = (graph.canonical(p) for p in points)
    distances = (graph.distance(a, b), graph.distance(b, c), graph.distance(a, c))
    side = max(distances)
    if side - min(distances) > 2 * eta + TOLERANCE:
        raise DomainError(f"points are not equilateral within {eta}: sides {distances}")
    if side <= TOLERANCE:
        raise DomainError("triad points coincide")
    return Triad((a, b, c), side, eta)


def _triples(dist: np.ndarray, band: np.ndarray) -> List[Tuple[int, int, int]]:
    """All i < j < k whose three pairs lie in band"""
    out: List[Tuple[int, int, int]] = []
    n = len(dist)
    for i in range(n):
        later = np.flatnonzero(band[i, i + 1:]) + i + 1
        if len(later) < 2:
            continue
        pairs = np.argwhere(np.triu(band[np.ix_(later, later)], 1))
        out.extend((i, int(later[a]), int(later[b])) for a, b in pairs)
    return out


def triads_at(net: Net, eps: float, eta: float) -> List[Triad]:
    """Every net triple with pairwise distances in [eps - eta, eps + eta]"""
    if eta < 2 * net.resolution:
        logger.debug(f"eta {eta:.6g} below twice the net resolution {net.resolution:.6g}")
    dist = net.distance_matrix
    band = (dist >= eps - eta - TOLERANCE) & (dist <= eps + eta + TOLERANCE)
    np.fill_diagonal(band, False)
    triads = []
    for i, j, k in _triples(dist, band):
        side = float(max(dist[i, j], dist[j, k], dist[i, k]))
        triads.append(Triad((net.points[i], net.points[j], net.points[k]), side, eta, (i, j, k)))
    return triads


def near_equilateral(net: Net, eps_min: float, eps_max: float, eta: float) -> List[Triad]:
    """Triples with spread at most 2*eta and largest side in [eps_min, eps_max]"""
    dist = net.distance_matrix
    band = (dist >= eps_min - 2 * eta - TOLERANCE) & (dist <= eps_max + TOLERANCE)
    np.fill_diagonal(band, False)
    triads = []
    for i, j, k in _triples(dist, band):
        sides = (dist[i, j], dist[j, k], dist[i, k])
        side = float(max(sides))
        if side - min(sides) > 2 * eta + TOLERANCE or not eps_min - TOLERANCE <= side <= eps_max + TOLERANCE:
            continue
        triads.append(Triad((net.points[i], net.points[j], net.points[k]), side, eta, (i, j, k)))
    return triads


@dataclass(frozen=True)
class TriadVerdict:
    """
    Essentiality of a triad at its side

    essential is None when undecided. certain is False when the answer
    rests on an Unknown search.
    """
    triad: Triad
    essential: Optional[bool]
    certain: bool
    certificate: Optional[H1Class]
    word: Word
    kind: GroupKind

    @property
    def class_key(self) -> Tuple:
        """Name of the H1-up-to-sign class, or the free conjugacy class when H1 vanishes"""
        if self.certificate is not None and not self.certificate.is_zero:
            return ('h1',) + self.certificate.canonical_sign().coordinates
        if self.kind == GroupKind.FREE:
            return ('word',) + cyclic_canonical(self.word)
        return ('triad',) + self.triad.indices


def is_essential(engine: HomotopyEngine, t: Triad, budget: Optional[SearchBudget] = None) -> Verdict:
    """Nullity verdict of the refined triad loop at its side; NotNull means essential"""
    return engine.is_null(t.loop(engine.graph), t.side, budget)


def classify_triad(engine: HomotopyEngine, t: Triad, budget: Optional[SearchBudget] = None) -> TriadVerdict:
    """
    Essentiality, decided algebraically when the group is recognised

    A nonzero H1 class is essential. For abelian or trivial groups a zero
    class is inessential; for free groups the reduced word decides. Other
    groups fall back on the nullity search.
    """
    group = engine.group(t.side)
    loop = t.loop(engine.graph)
    indices = loop_indices(loop, engine.net)
    word = group.word(indices)
    certificate = group.abelian.class_of(word)
    reduced = group.simplified.expand(word) if group.kind == GroupKind.FREE else word
    if not certificate.is_zero:
        return TriadVerdict(t, True, True, certificate, reduced, group.kind)
    if group.kind in (GroupKind.ABELIAN, GroupKind.TRIVIAL):
        return TriadVerdict(t, False, True, certificate, reduced, group.kind)
    if group.kind == GroupKind.FREE:
        return TriadVerdict(t, bool(reduced), True, certificate, reduced, group.kind)
    verdict = engine.is_null(loop, t.side, budget)
    if verdict.kind == VerdictKind.UNKNOWN:
        return TriadVerdict(t, None, False, certificate, word, group.kind)
    return TriadVerdict(t, verdict.kind == VerdictKind.NOT_NULL, True, certificate, word, group.kind)


def _conjugated_loops(engine: HomotopyEngine, t1: Triad, t2: Triad, eps: float) -> List[Chain]:
    """kappa * alpha2 * reverse(kappa) * reverse(alpha1) over rotations and orientations of t2"""
    graph = engine.graph
    alpha1 = t1.loop(graph, eps)
    loops = []
    for candidate in [t2.rotated(k) for k in range(3)] + [t2.reflected().rotated(k) for k in range(3)]:
        kappa = geodesic_chain(graph, alpha1.first, candidate.points[0], eps)
        alpha2 = candidate.loop(graph, eps)
        loops.append(concat(concat(concat(kappa, alpha2), reverse(kappa)), reverse(alpha1)))
    return loops[:CONJUGATOR_SEARCH_LIMIT]


def equivalent_triads(engine: HomotopyEngine, t1: Triad, t2: Triad,
                      budget: Optional[SearchBudget] = None) -> Equivalence:
    """
    Free eps-homotopy equivalence of two essential triads, up to reversal

    Read at eps = the larger side. Distinct H1 classes (up to sign) are
    certainly distinct; abelian groups and shared point sets are certainly
    equivalent; free groups compare cyclic words. Otherwise a conjugating
    geodesic is searched for, and failing that the answer is heuristic.
    """
    eps = max(t1.side, t2.side)
    group = engine.group(eps)
    graph = engine.graph
    w1 = group.word(loop_indices(t1.loop(graph, eps), engine.net))
    w2 = group.word(loop_indices(t2.loop(graph, eps), engine.net))
    c1, c2 = group.abelian.class_of(w1), group.abelian.class_of(w2)
    if not c1.equal_up_to_sign(c2):
        return Equivalence.DISTINCT
    if t1.point_set == t2.point_set:
        return Equivalence.EQUIVALENT
    if group.kind in (GroupKind.ABELIAN, GroupKind.TRIVIAL):
        return Equivalence.EQUIVALENT
    if group.kind == GroupKind.FREE:
        same = cyclic_canonical(group.simplified.expand(w1)) == cyclic_canonical(group.simplified.expand(w2))
        return Equivalence.EQUIVALENT if same else Equivalence.DISTINCT
    for loop in _conjugated_loops(engine, t1, t2, eps):
        if engine.is_null(loop, eps, budget).is_null:
            return Equivalence.EQUIVALENT
    logger.warning(f"triads at {eps:.6g} agree in H1 but no conjugating chain was found")
    return Equivalence.HEURISTIC_EQUAL
