"""
Cover Balls
Based R-balls of epsilon-covers and circle covers, with projections and deck actions
"""

import heapq
import logging
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from chains.chain import Chain, concat
from config.constants import EMOJI_COMPLETE, EMOJI_PROCESSING, FORMAT_VERSION, TOLERANCE
from config.enums import GroupKind, VerdictKind
from config.errors import DomainError, UnresolvedVerdictError
from config.run_config import SearchBudget
from covers.kernel import KernelSpec
from engine.abelian import AbelianGroup
from engine.homotopy import HomotopyEngine, RipsGroup, loop_indices
from engine.presentation import SimplifiedPresentation
from engine.words import free_reduce
from geometry.metric_graph import GraphPoint, MetricGraph

logger = logging.getLogger(__name__)


class AbelianElements:
    """Quotient elements as H1 coordinates"""

    def __init__(self, quotient: SimplifiedPresentation):
        self.group = AbelianGroup(quotient)
        self._deltas: Dict[int, Tuple[int, ...]] = {}

    def identity(self) -> Hashable:
        return self.group.zero.coordinates

    def step(self, element: Hashable, letter: int) -> Hashable:
        if not letter:
            return element
        if letter not in self._deltas:
            self._deltas[letter] = self.group.class_of((letter,)).coordinates
        moduli = self.group.moduli
        return tuple((a + b) % m if m else a + b
                     for a, b, m in zip(element, self._deltas[letter], moduli))


class FreeElements:
    """Quotient elements as reduced words over the surviving free generators"""

    def __init__(self, quotient: SimplifiedPresentation):
        self.quotient = quotient

    def identity(self) -> Hashable:
        return ()

    def step(self, element: Hashable, letter: int) -> Hashable:
        if not letter:
            return element
        return free_reduce(element + self.quotient.expand((letter,)))


class CoverBall:
    """
    Explored part of a cover around the base node

    Nodes are (net index, element) pairs; the explored region reaches
    twice the radius so that distances between ball nodes are exact in
    the lifted Rips graph. ball lists the nodes of norm at most radius.
    """

    def __init__(self, engine: HomotopyEngine, eps: float, radius: float, kernel: KernelSpec,
                 group: RipsGroup, quotient: SimplifiedPresentation, algebra: Any):
        self.engine = engine
        self.graph: MetricGraph = engine.graph
        self.net = engine.net
        self.eps = float(eps)
        self.radius = float(radius)
        self.kernel = kernel
        self.group = group
        self.quotient = quotient
        self.algebra = algebra
        self.nodes: List[Tuple[int, Hashable]] = []
        self.norms: List[float] = []
        self.parents: List[int] = []
        self.weights: Dict[Tuple[int, int], float] = {}
        self._index: Dict[Tuple[int, Hashable], int] = {}
        self._rows: Dict[int, np.ndarray] = {}
        self._csgraph: Optional[csr_matrix] = None

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def _path(self, i: int) -> List[int]:
        path = []
        while i >= 0:
            path.append(self.nodes[i][0])
            i = self.parents[i]
        return path[::-1]

    def _chain(self, indices: Sequence[int]) -> Chain:
        return Chain(tuple(self.net.points[i] for i in indices), self.eps, self.graph)

    def _lookup(self, v: int, element: Hashable, path: Sequence[int]) -> Optional[int]:
        if self.algebra is not None:
            return self._index.get((v, element))
        # unrecognised group, empty kernel: identify by nullity of the closed-up pair
        if (v, element) in self._index:
            return self._index[(v, element)]
        for (w, _), node in self._index.items():
            if w != v:
                continue
            existing = self._path(node)
            loop = concat(self._chain(path), self._chain(existing[::-1]))
            verdict = self.engine.is_null(loop, self.eps)
            if verdict.kind == VerdictKind.NULL:
                return node
            if verdict.kind == VerdictKind.UNKNOWN:
                raise UnresolvedVerdictError(
                    f"cannot decide whether chains ending at net point {v} agree at scale {self.eps:.6g}: "
                    f"{verdict.detail}")
        return None

    def _step(self, element: Hashable, letter: int) -> Hashable:
        if self.algebra is not None:
            return self.algebra.step(element, letter)
        return free_reduce(element + ((letter,) if letter else ()))

    def _add_node(self, v: int, element: Hashable, norm: float, parent: int) -> int:
        node = len(self.nodes)
        self.nodes.append((v, element))
        self.norms.append(norm)
        self.parents.append(parent)
        self._index[(v, element)] = node
        return node

    def explore(self) -> 'CoverBall':
        """Dijkstra over lifted Rips edges out to twice the radius"""
        adjacency = self.group.presentation.adjacency
        dist = self.net.distance_matrix
        limit = 2.0 * self.radius + TOLERANCE
        base = self.net.index_of(self.engine.basepoint)
        identity = self.algebra.identity() if self.algebra is not None else ()
        self._add_node(base, identity, 0.0, -1)
        best = [0.0]
        heap = [(0.0, 0)]
        done = set()
        neighbours = [np.flatnonzero(adjacency[v]) for v in range(len(self.net))]
        while heap:
            d, node = heapq.heappop(heap)
            if node in done or d > best[node] + TOLERANCE:
                continue
            done.add(node)
            v, element = self.nodes[node]
            for w in neighbours[v]:
                w = int(w)
                length = float(dist[v, w])
                tentative = d + length
                if tentative > limit:
                    continue
                target_element = self._step(element, self.group.presentation.letter(v, w))
                target = self._lookup(w, target_element, self._path(node) + [w])
                if target is None:
                    target = self._add_node(w, target_element, tentative, node)
                    best.append(tentative)
                    heapq.heappush(heap, (tentative, target))
                elif tentative < best[target] - TOLERANCE:
                    best[target] = tentative
                    self.norms[target] = tentative
                    self.parents[target] = node
                    heapq.heappush(heap, (tentative, target))
                key = (min(node, target), max(node, target))
                if node != target:
                    self.weights[key] = min(length, self.weights.get(key, length))
        self.norms = best
        return self

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    @property
    def ball(self) -> List[int]:
        return [i for i, r in enumerate(self.norms) if r <= self.radius + TOLERANCE]

    @property
    def basepoint_node(self) -> int:
        return 0

    def _graph(self) -> csr_matrix:
        if self._csgraph is None:
            n = len(self.nodes)
            keys = list(self.weights)
            rows = [k[0] for k in keys]
            cols = [k[1] for k in keys]
            self._csgraph = csr_matrix(([self.weights[k] for k in keys], (rows, cols)), shape=(n, n))
        return self._csgraph

    def distances_from(self, i: int) -> np.ndarray:
        if i not in self._rows:
            self._rows[i] = dijkstra(self._graph(), directed=False, indices=i)
        return self._rows[i]

    def distance(self, i: int, j: int) -> float:
        """Cover distance between explored nodes"""
        return float(self.distances_from(i)[j])

    def distance_matrix(self, nodes: Optional[Sequence[int]] = None) -> np.ndarray:
        nodes = list(self.ball if nodes is None else nodes)
        full = dijkstra(self._graph(), directed=False, indices=nodes)
        return full[:, nodes]

    def projection(self, i: int) -> GraphPoint:
        return self.net.points[self.nodes[i][0]]

    def representative(self, i: int) -> Chain:
        """Shortest chain from the basepoint found by the exploration"""
        return self._chain(self._path(i))

    def locate(self, chain: Chain) -> Optional[int]:
        """Node of the class of a chain from the basepoint; None outside the explored region"""
        if chain.first != self.engine.basepoint:
            raise DomainError("chains located in a cover ball must start at the basepoint")
        indices = loop_indices(chain.at_scale(self.eps), self.net)
        element = self.algebra.identity() if self.algebra is not None else ()
        for a, b in zip(indices, indices[1:]):
            element = self._step(element, self.group.presentation.letter(a, b))
        return self._lookup(indices[-1], element, indices)

    def to_metric_graph(self) -> MetricGraph:
        """The ball as a metric graph on its nodes (ids are positions in ball)"""
        members = self.ball
        position = {node: k for k, node in enumerate(members)}
        edges = []
        for (i, j), w in sorted(self.weights.items()):
            if i in position and j in position:
                edges.append((len(edges), position[i], position[j], w))
        if not edges:
            raise DomainError("cover ball has no edges; increase the radius")
        return MetricGraph(range(len(members)), edges)

    def projection_table(self) -> Dict[str, Any]:
        return {
            'format_version': FORMAT_VERSION,
            'scale': self.eps,
            'radius': self.radius,
            'nodes': [
                {'id': k, 'point': self.projection(node).to_pair(), 'norm': self.norms[node]}
                for k, node in enumerate(self.ball)
            ],
        }


def cover_ball(engine: HomotopyEngine, eps: float, radius: float,
               kernel: Optional[KernelSpec] = None,
               budget: Optional[SearchBudget] = None) -> CoverBall:
    """
    R-ball of the cover at eps, quotiented by the kernel triads' lollichains

    An empty kernel gives the eps-cover itself.

    Raises:
        DomainError: bad scale or radius
        UnresolvedVerdictError: the quotient group is not recognised and a
            kernel is present, or an identification is Unknown
    """
    if radius <= 0:
        raise DomainError(f"radius must be positive, got {radius}")
    if eps <= 2 * engine.net.resolution:
        raise DomainError(f"scale {eps:.6g} must exceed twice the net resolution {engine.net.resolution:.6g}")
    kernel = kernel or KernelSpec()
    group = engine.group(eps)
    quotient = group.simplified.with_relators(kernel.words(engine, eps)) if len(kernel) else group.simplified
    if quotient.kind in (GroupKind.ABELIAN, GroupKind.TRIVIAL):
        algebra = AbelianElements(quotient)
    elif quotient.kind == GroupKind.FREE:
        algebra = FreeElements(quotient)
    elif len(kernel):
        raise UnresolvedVerdictError(
            f"quotient group at scale {eps:.6g} is not recognised; cannot identify classes modulo the kernel")
    else:
        algebra = None
        logger.warning(f"group at scale {eps:.6g} not recognised; identifying chains by nullity search")
    logger.info(f"{EMOJI_PROCESSING} Exploring cover ball: eps {eps:.6g}, radius {radius:.6g}, "
                f"{len(kernel)} kernel triads, quotient kind {quotient.kind.value}")
    ball = CoverBall(engine, eps, radius, kernel, group, quotient, algebra).explore()
    logger.info(f"{EMOJI_COMPLETE} Cover ball: {len(ball.ball)} nodes within radius, {len(ball.nodes)} explored")
    return ball


def deck_action(ball: CoverBall, loop: Chain) -> Dict[int, int]:
    """
    Partial map [alpha] -> [loop * alpha] on ball nodes

    Nodes whose image leaves the explored region or cannot be identified
    are left out.
    """
    if not loop.is_loop or loop.first != ball.engine.basepoint:
        raise DomainError("deck transformations need a loop at the basepoint")
    loop = loop.at_scale(ball.eps)
    members = set(ball.ball)
    action: Dict[int, int] = {}
    for node in ball.ball:
        try:
            image = ball.locate(concat(loop, ball.representative(node)))
        except UnresolvedVerdictError as e:
            logger.warning(f"deck image of node {node} unresolved: {e.diagnostic}")
            continue
        if image is not None and image in members:
            action[node] = image
    return action


def quotient_group_invariants(ball: CoverBall) -> Tuple[int, List[int]]:
    """(rank, torsion) of the abelianized deck group pi_eps / K"""
    abelian = ball.group.abelian
    rows = [abelian.exponent_vector(w) for w in ball.kernel.words(ball.engine, ball.eps)]
    return abelian.quotient_invariants(rows)
