"""
Chains
epsilon-chains, basic moves and the replayable homotopies built from them
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config.constants import TOLERANCE
from config.enums import MoveKind
from config.errors import DomainError, SnapError
from geometry.metric_graph import GraphPoint, MetricGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Move:
    """Insert a point at index, or remove the point at index"""
    kind: MoveKind
    index: int
    point: GraphPoint

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'index': self.index, 'point': self.point.to_pair()}


@dataclass(frozen=True, eq=False)
class Chain:
    """
    A finite point sequence whose consecutive gaps are below scale

    "Below" means below scale - 1e-9. Points are stored in canonical form.
    provenance, when present, is a homotopy whose end is this chain.
    """
    points: Tuple[GraphPoint, ...]
    scale: float
    graph: MetricGraph = field(repr=False)
    provenance: Optional['Homotopy'] = field(default=None, repr=False)
    gaps: Tuple[float, ...] = field(init=False, repr=False, default=())

    def __post_init__(self):
        if not self.points:
            raise DomainError("a chain needs at least one point")
        if not self.scale > 0:
            raise DomainError(f"chain scale must be positive, got {self.scale}")
        points = tuple(self.graph.canonical(p) for p in self.points)
        gaps = tuple(self.graph.distance(a, b) for a, b in zip(points, points[1:]))
        for i, gap in enumerate(gaps):
            if gap >= self.scale - TOLERANCE:
                raise DomainError(f"gap {i} has length {gap:.12g}, not below scale {self.scale:.12g}")
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'scale', float(self.scale))
        object.__setattr__(self, 'gaps', gaps)

    @classmethod
    def from_pairs(cls, graph: MetricGraph, pairs: Sequence[Sequence[float]], scale: float) -> 'Chain':
        return cls(tuple(graph.point(int(e), o) for e, o in pairs), scale, graph)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Chain) and self.points == other.points
                and abs(self.scale - other.scale) <= TOLERANCE)

    def __hash__(self) -> int:
        return hash(self.points)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def segments(self) -> int:
        """Number of gaps (the chain's point count minus one)"""
        return len(self.points) - 1

    @property
    def first(self) -> GraphPoint:
        return self.points[0]

    @property
    def last(self) -> GraphPoint:
        return self.points[-1]

    @property
    def is_loop(self) -> bool:
        return self.points[0] == self.points[-1]

    def at_scale(self, scale: float) -> 'Chain':
        """Same points read at another scale; fails if a gap is too long"""
        return Chain(self.points, scale, self.graph)


def apply_move(points: List[GraphPoint], move: Move, scale: float, graph: MetricGraph) -> None:
    """
    Apply one basic move in place, validating it

    Interior moves keep every new gap below scale. Endpoints stay fixed:
    only a duplicate of an endpoint may be added or dropped next to it.
    """
    n = len(points)
    bound = scale - TOLERANCE
    p = graph.canonical(move.point)
    i = move.index
    if move.kind == MoveKind.INSERT:
        if not 0 <= i <= n:
            raise DomainError(f"insert index {i} out of range for {n} points")
        if i == 0 or i == n:
            endpoint = points[0] if i == 0 else points[-1]
            if p != endpoint:
                raise DomainError(f"insert at end {i} must duplicate the endpoint")
        elif graph.distance(points[i - 1], p) >= bound or graph.distance(p, points[i]) >= bound:
            raise DomainError(f"insert at {i} creates a gap not below {scale:.12g}")
        points.insert(i, p)
        return
    if n < 2 or not 0 <= i < n:
        raise DomainError(f"remove index {i} out of range for {n} points")
    if points[i] != p:
        raise DomainError(f"remove at {i} names {p!r} but the chain holds {points[i]!r}")
    if i == 0 and points[1] != p:
        raise DomainError("only a duplicated first point may be removed")
    if i == n - 1 and points[n - 2] != p:
        raise DomainError("only a duplicated last point may be removed")
    if 0 < i < n - 1 and graph.distance(points[i - 1], points[i + 1]) >= bound:
        raise DomainError(f"remove at {i} leaves a gap not below {scale:.12g}")
    del points[i]


@dataclass(frozen=True)
class Homotopy:
    """A start chain and a sequence of basic moves at the start chain's scale"""
    start: Chain
    moves: Tuple[Move, ...] = ()

    @property
    def scale(self) -> float:
        return self.start.scale

    def replay(self) -> Chain:
        """Apply every move with validation and return the final chain"""
        points = list(self.start.points)
        graph = self.start.graph
        for step, move in enumerate(self.moves):
            try:
                apply_move(points, move, self.scale, graph)
            except DomainError as e:
                raise DomainError(f"move {step} invalid: {e}") from e
        return Chain(tuple(points), self.scale, graph)

    @property
    def end(self) -> Chain:
        return self.replay()

    def then(self, moves: Sequence[Move]) -> 'Homotopy':
        return Homotopy(self.start, self.moves + tuple(moves))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'start': chain_to_json(self.start),
            'scale': self.scale,
            'moves': [m.to_dict() for m in self.moves],
        }


def length(c: Chain) -> float:
    return float(sum(c.gaps))


def concat(a: Chain, b: Chain) -> Chain:
    if abs(a.scale - b.scale) > TOLERANCE:
        raise DomainError(f"cannot concatenate chains at scales {a.scale} and {b.scale}")
    if a.last != b.first:
        raise DomainError("concatenation needs the last point of the first chain to start the second")
    return Chain(a.points + b.points[1:], a.scale, a.graph)


def reverse(a: Chain) -> Chain:
    return Chain(tuple(reversed(a.points)), a.scale, a.graph)


def gap_excess(c: Chain) -> float:
    """Smallest slack scale - gap; the scale itself for a one-point chain"""
    if not c.gaps:
        return c.scale
    return c.scale - max(c.gaps)


def deviation(a: Chain, b: Chain) -> float:
    """Largest pointwise distance between chains of equal point count"""
    if len(a) != len(b):
        raise DomainError(f"deviation needs equal point counts, got {len(a)} and {len(b)}")
    return max(a.graph.distance(p, q) for p, q in zip(a.points, b.points))


def refined_polygon(graph: MetricGraph, corners: Sequence[GraphPoint], scale: float) -> Chain:
    """
    Midpoint refinement of the closed polygon through corners

    The polygon itself need not be a chain at scale, only its refinement.
    """
    corners = [graph.canonical(p) for p in corners]
    ring = corners + [corners[0]]
    points: List[GraphPoint] = []
    for a, b in zip(ring, ring[1:]):
        points.append(a)
        points.append(graph.midpoint(a, b))
    points.append(ring[-1])
    return Chain(tuple(points), scale, graph)


def geodesic_chain(graph: MetricGraph, p: GraphPoint, q: GraphPoint, scale: float) -> Chain:
    """Equal subdivision of the tie-broken geodesic from p to q with gaps below scale"""
    d = graph.distance(p, q)
    if d <= TOLERANCE:
        return Chain((graph.canonical(p),), scale, graph)
    steps = max(1, int(math.ceil(d / scale)))
    while d / steps >= scale - TOLERANCE:
        steps += 1
    points = [graph.canonical(p)]
    points += [graph.geodesic_point(p, q, d * j / steps) for j in range(1, steps)]
    points.append(graph.canonical(q))
    return Chain(tuple(points), scale, graph)


def midpoint_refinement(c: Chain) -> Chain:
    """Insert the midpoint of every gap; the moves are recorded as provenance"""
    graph = c.graph
    points = list(c.points)
    moves: List[Move] = []
    refined: List[GraphPoint] = [points[0]]
    for k, (a, b) in enumerate(zip(points, points[1:])):
        m = graph.midpoint(a, b)
        moves.append(Move(MoveKind.INSERT, 2 * k + 1, m))
        refined.extend([m, b])
    return Chain(tuple(refined), c.scale, graph, provenance=Homotopy(c, tuple(moves)))


def refine_to_scale(c: Chain, eps: float) -> Chain:
    """
    Subdivide every gap along its geodesic until all gaps are below eps

    Endpoints and length are preserved. The insertion moves are valid at
    the original scale and recorded as provenance.
    """
    if eps > c.scale + TOLERANCE:
        raise DomainError(f"target scale {eps} exceeds chain scale {c.scale}")
    graph = c.graph
    refined: List[GraphPoint] = [c.points[0]]
    moves: List[Move] = []
    for gap, a, b in zip(c.gaps, c.points, c.points[1:]):
        if gap >= eps - TOLERANCE:
            steps = max(2, int(math.ceil(gap / eps)))
            while gap / steps >= eps - TOLERANCE:
                steps += 1
            for j in range(1, steps):
                y = graph.geodesic_point(a, b, gap * j / steps)
                moves.append(Move(MoveKind.INSERT, len(refined), y))
                refined.append(y)
        refined.append(b)
    return Chain(tuple(refined), eps, graph, provenance=Homotopy(c, tuple(moves)))


def normalize_count(c: Chain, bound: float) -> Chain:
    """
    Chain homotopic to c with exactly floor(2*bound/scale + 1) segments

    Too many segments: repeatedly drop the interior point whose two
    adjacent gaps have the smallest sum (lowest index on ties) among the
    legal removals. Too few: repeat the last point. Length never grows.

    Raises:
        DomainError: length(c) exceeds bound
    """
    total = length(c)
    if total > bound + TOLERANCE:
        raise DomainError(f"chain length {total:.12g} exceeds bound {bound:.12g}")
    graph, eps = c.graph, c.scale
    target = int(math.floor(2.0 * bound / eps + 1.0 + TOLERANCE))
    points = list(c.points)
    gaps = list(c.gaps)
    moves: List[Move] = []

    while len(points) - 1 > target:
        order = sorted(range(1, len(points) - 1), key=lambda i: (gaps[i - 1] + gaps[i], i))
        removed = None
        for i in order:
            bridge = graph.distance(points[i - 1], points[i + 1])
            if bridge < eps - TOLERANCE:
                removed = i
                break
        if removed is None:
            raise DomainError("no legal removal shortens the chain")
        moves.append(Move(MoveKind.REMOVE, removed, points[removed]))
        del points[removed]
        gaps[removed - 1:removed + 1] = [bridge]

    while len(points) - 1 < target:
        moves.append(Move(MoveKind.INSERT, len(points), points[-1]))
        points.append(points[-1])
        gaps.append(0.0)

    return Chain(tuple(points), eps, graph, provenance=Homotopy(c, tuple(moves)))


def snap_moves(c: Chain, targets: Sequence[GraphPoint]) -> List[Move]:
    """
    Moves carrying c onto targets point by point

    Each interior target is inserted after its already-snapped predecessor
    and the original point is then removed.

    Raises:
        SnapError: some point moves by gap_excess(c)/2 or more
        DomainError: point counts differ or an endpoint would move
    """
    graph = c.graph
    targets = [graph.canonical(p) for p in targets]
    if len(targets) != len(c.points):
        raise DomainError("snap targets must match the chain's point count")
    if targets[0] != c.first or targets[-1] != c.last:
        raise DomainError("snapping keeps both endpoints fixed")
    limit = gap_excess(c) / 2.0
    for p, q in zip(c.points, targets):
        moved = graph.distance(p, q)
        if moved >= limit - TOLERANCE:
            raise SnapError(f"snapping moves a point by {moved:.12g}, limit is {limit:.12g}")
    moves: List[Move] = []
    for i in range(1, len(targets) - 1):
        if targets[i] == c.points[i]:
            continue
        moves.append(Move(MoveKind.INSERT, i, targets[i]))
        moves.append(Move(MoveKind.REMOVE, i + 1, c.points[i]))
    return moves


def snap_homotopy(c: Chain, targets: Sequence[GraphPoint]) -> Homotopy:
    return Homotopy(c, tuple(snap_moves(c, targets)))


def chain_to_json(c: Chain) -> Dict[str, Any]:
    return {'scale': c.scale, 'points': [p.to_pair() for p in c.points]}


def chain_from_json(data: Dict[str, Any], graph: MetricGraph) -> Chain:
    try:
        return Chain.from_pairs(graph, data['points'], float(data['scale']))
    except (KeyError, TypeError) as e:
        raise DomainError(f"malformed chain JSON: {e}") from e
