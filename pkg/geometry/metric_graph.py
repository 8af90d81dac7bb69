"""
Metric Graphs
Compact geodesic spaces modelled as connected graphs with positive edge lengths
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from config.constants import QUANTIZATION, TOLERANCE, DIAMETER_PROBE_SEGMENTS
from config.errors import DomainError

logger = logging.getLogger(__name__)

# (edge id, direction, start offset, end offset); direction 0 runs tail -> head
Segment = Tuple[int, int, float, float]


@dataclass(frozen=True)
class Edge:
    """An edge with tail <= head; offsets are measured from the tail"""
    edge_id: int
    tail: int
    head: int
    length: float

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True, eq=False)
class GraphPoint:
    """
    A point of a metric graph: an edge and an offset from its tail

    Only MetricGraph.point produces canonical points. Equality and hashing
    quantize the offset at 1e-9.
    """
    edge: int
    offset: float

    @property
    def key(self) -> Tuple[int, int]:
        return (self.edge, int(round(self.offset * QUANTIZATION)))

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphPoint) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __lt__(self, other: 'GraphPoint') -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"GraphPoint(edge={self.edge}, offset={self.offset:.12g})"

    def to_pair(self) -> List[float]:
        return [self.edge, self.offset]


@dataclass(frozen=True)
class PointArrays:
    """Column view of a point list used by the vectorized distance routines"""
    edges: np.ndarray
    offsets: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    lengths: np.ndarray


class MetricGraph:
    """
    A connected metric graph; self-loops and parallel edges are allowed

    Immutable after construction. Vertex-to-vertex distances are computed
    once with scipy's shortest_path; every point distance reduces to them.
    """

    def __init__(self, vertices: Iterable[int], edges: Iterable[Tuple[int, int, int, float]]):
        vertex_list = [int(v) for v in vertices]
        if len(set(vertex_list)) != len(vertex_list):
            raise DomainError("duplicate vertex id")
        self._vertices: Tuple[int, ...] = tuple(sorted(vertex_list))
        self._vindex: Dict[int, int] = {v: i for i, v in enumerate(self._vertices)}

        edge_list: List[Edge] = []
        seen_ids = set()
        for edge_id, v1, v2, length in edges:
            edge_id, v1, v2, length = int(edge_id), int(v1), int(v2), float(length)
            if edge_id in seen_ids:
                raise DomainError(f"duplicate edge id {edge_id}")
            seen_ids.add(edge_id)
            if v1 not in self._vindex or v2 not in self._vindex:
                raise DomainError(f"edge {edge_id} references an unknown vertex")
            if not math.isfinite(length) or length <= 0:
                raise DomainError(f"edge {edge_id} has nonpositive or infinite length {length}")
            edge_list.append(Edge(edge_id, min(v1, v2), max(v1, v2), length))
        if not edge_list:
            raise DomainError("a metric graph needs at least one edge")
        self._edges: Tuple[Edge, ...] = tuple(sorted(edge_list, key=lambda e: e.edge_id))
        self._edge_by_id: Dict[int, Edge] = {e.edge_id: e for e in self._edges}

        multigraph = nx.MultiGraph()
        multigraph.add_nodes_from(self._vertices)
        multigraph.add_edges_from((e.tail, e.head) for e in self._edges)
        if not nx.is_connected(multigraph):
            raise DomainError("metric graph is disconnected")

        self._incident: Dict[int, List[int]] = {v: [] for v in self._vertices}
        self._adjacency: Dict[int, List[Tuple[int, int, int, float]]] = {v: [] for v in self._vertices}
        for e in self._edges:
            self._incident[e.tail].append(e.edge_id)
            if not e.is_loop:
                self._incident[e.head].append(e.edge_id)
                self._adjacency[e.tail].append((e.edge_id, 0, e.head, e.length))
                self._adjacency[e.head].append((e.edge_id, 1, e.tail, e.length))
        for v in self._vertices:
            self._incident[v].sort()
            self._adjacency[v].sort()

        self._vertex_points: Dict[int, GraphPoint] = {}
        for v in self._vertices:
            if not self._incident[v]:
                raise DomainError(f"vertex {v} has no incident edge")
            e = self._edge_by_id[self._incident[v][0]]
            self._vertex_points[v] = GraphPoint(e.edge_id, 0.0 if e.tail == v else e.length)

        self._dist = self._vertex_distance_matrix()
        logger.debug(f"Metric graph built: {len(self._vertices)} vertices, {len(self._edges)} edges")

    def _vertex_distance_matrix(self) -> np.ndarray:
        shortest: Dict[Tuple[int, int], float] = {}
        for e in self._edges:
            if e.is_loop:
                continue
            key = (self._vindex[e.tail], self._vindex[e.head])
            shortest[key] = min(e.length, shortest.get(key, math.inf))
        n = len(self._vertices)
        if not shortest:
            return np.zeros((n, n))
        rows = [k[0] for k in shortest]
        cols = [k[1] for k in shortest]
        weights = csr_matrix((list(shortest.values()), (rows, cols)), shape=(n, n))
        return shortest_path(weights, method='D', directed=False)

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------

    @property
    def vertices(self) -> Tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    def edge(self, edge_id: int) -> Edge:
        try:
            return self._edge_by_id[edge_id]
        except KeyError:
            raise DomainError(f"no edge with id {edge_id}") from None

    def degree(self, vertex: int) -> int:
        """Valency, counting a self-loop twice"""
        return sum(2 if self._edge_by_id[e].is_loop else 1 for e in self._incident[vertex])

    @property
    def total_length(self) -> float:
        return float(sum(e.length for e in self._edges))

    def same_combinatorics(self, other: 'MetricGraph') -> bool:
        return (self._vertices == other._vertices and
                [(e.edge_id, e.tail, e.head) for e in self._edges] ==
                [(e.edge_id, e.tail, e.head) for e in other._edges])

    def vertex_distance(self, u: int, v: int) -> float:
        return float(self._dist[self._vindex[u], self._vindex[v]])

    # ------------------------------------------------------------------
    # Points
    # ------------------------------------------------------------------

    def point(self, edge_id: int, offset: float) -> GraphPoint:
        """Canonical point at the given offset from the tail of edge_id"""
        e = self.edge(edge_id)
        offset = float(offset)
        if offset < -TOLERANCE or offset > e.length + TOLERANCE:
            raise DomainError(f"offset {offset} outside edge {edge_id} of length {e.length}")
        if offset <= TOLERANCE:
            return self._vertex_points[e.tail]
        if offset >= e.length - TOLERANCE:
            return self._vertex_points[e.head]
        return GraphPoint(e.edge_id, offset)

    def vertex_point(self, vertex: int) -> GraphPoint:
        try:
            return self._vertex_points[vertex]
        except KeyError:
            raise DomainError(f"no vertex with id {vertex}") from None

    def vertex_of(self, p: GraphPoint) -> Optional[int]:
        """The vertex at p, or None for an edge-interior point"""
        e = self.edge(p.edge)
        if p.offset <= TOLERANCE:
            return e.tail
        if p.offset >= e.length - TOLERANCE:
            return e.head
        return None

    def canonical(self, p: GraphPoint) -> GraphPoint:
        """Canonical form of p; raises DomainError when p is not on this graph"""
        if not isinstance(p, GraphPoint):
            raise DomainError(f"not a graph point: {p!r}")
        return self.point(p.edge, p.offset)

    def point_arrays(self, points: Sequence[GraphPoint]) -> PointArrays:
        edges = [self.edge(p.edge) for p in points]
        return PointArrays(
            edges=np.array([p.edge for p in points], dtype=np.int64),
            offsets=np.array([p.offset for p in points], dtype=float),
            tails=np.array([self._vindex[e.tail] for e in edges], dtype=np.int64),
            heads=np.array([self._vindex[e.head] for e in edges], dtype=np.int64),
            lengths=np.array([e.length for e in edges], dtype=float),
        )

    # ------------------------------------------------------------------
    # Distances
    # ------------------------------------------------------------------

    def _to_vertices(self, p: GraphPoint) -> np.ndarray:
        e = self._edge_by_id[p.edge]
        tail, head = self._vindex[e.tail], self._vindex[e.head]
        return np.minimum(p.offset + self._dist[tail], (e.length - p.offset) + self._dist[head])

    def distance(self, p: GraphPoint, q: GraphPoint) -> float:
        """Geodesic distance between two points of the graph"""
        p, q = self.canonical(p), self.canonical(q)
        if p == q:
            return 0.0
        to_vertices = self._to_vertices(p)
        eq = self._edge_by_id[q.edge]
        best = min(q.offset + to_vertices[self._vindex[eq.tail]],
                   (eq.length - q.offset) + to_vertices[self._vindex[eq.head]])
        if p.edge == q.edge:
            best = min(best, abs(p.offset - q.offset))
        return float(best)

    def distances_to(self, p: GraphPoint, arrays: PointArrays) -> np.ndarray:
        """Distances from p to every point of a PointArrays batch"""
        p = self.canonical(p)
        to_vertices = self._to_vertices(p)
        out = np.minimum(arrays.offsets + to_vertices[arrays.tails],
                         (arrays.lengths - arrays.offsets) + to_vertices[arrays.heads])
        same = arrays.edges == p.edge
        out[same] = np.minimum(out[same], np.abs(arrays.offsets[same] - p.offset))
        return out

    def pairwise_distances(self, points: Sequence[GraphPoint]) -> np.ndarray:
        """Symmetric distance matrix of a point list"""
        if not points:
            return np.zeros((0, 0))
        arrays = self.point_arrays([self.canonical(p) for p in points])
        o, lengths = arrays.offsets, arrays.lengths
        to_vertices = np.minimum(o[:, None] + self._dist[arrays.tails, :],
                                 (lengths - o)[:, None] + self._dist[arrays.heads, :])
        out = np.minimum(o[None, :] + to_vertices[:, arrays.tails],
                         (lengths - o)[None, :] + to_vertices[:, arrays.heads])
        same = arrays.edges[:, None] == arrays.edges[None, :]
        out = np.where(same, np.minimum(out, np.abs(o[:, None] - o[None, :])), out)
        out = np.minimum(out, out.T)
        np.fill_diagonal(out, 0.0)
        return out

    @cached_property
    def diameter(self) -> float:
        """Diameter estimated on a fine net; exact up to twice its spacing"""
        probe = build_net(self, self.total_length / DIAMETER_PROBE_SEGMENTS)
        return float(probe.distance_matrix.max())

    # ------------------------------------------------------------------
    # Geodesics
    # ------------------------------------------------------------------

    def _vertex_path(self, a: int, b: int) -> List[Segment]:
        """Lexicographically first shortest vertex path, walked greedily"""
        segments: List[Segment] = []
        ib = self._vindex[b]
        x = a
        while x != b:
            remaining = self._dist[self._vindex[x], ib]
            choice = None
            best_residual = math.inf
            for edge_id, direction, y, length in self._adjacency[x]:
                residual = abs(length + self._dist[self._vindex[y], ib] - remaining)
                if residual <= TOLERANCE:
                    choice = (edge_id, direction, y, length)
                    break
                if residual < best_residual:
                    best_residual, choice = residual, (edge_id, direction, y, length)
            edge_id, direction, y, length = choice
            segments.append((edge_id, direction, 0.0, length) if direction == 0
                            else (edge_id, direction, length, 0.0))
            x = y
        return segments

    def _route(self, p: GraphPoint, q: GraphPoint, d: float) -> List[Segment]:
        ep, eq = self._edge_by_id[p.edge], self._edge_by_id[q.edge]
        candidates: List[List[Segment]] = []
        if p.edge == q.edge and abs(p.offset - q.offset) <= d + TOLERANCE:
            direction = 0 if q.offset >= p.offset else 1
            candidates.append([(p.edge, direction, p.offset, q.offset)])
        exits = [(ep.tail, p.offset, (p.edge, 1, p.offset, 0.0)),
                 (ep.head, ep.length - p.offset, (p.edge, 0, p.offset, ep.length))]
        entries = [(eq.tail, q.offset, (q.edge, 0, 0.0, q.offset)),
                   (eq.head, eq.length - q.offset, (q.edge, 1, eq.length, q.offset))]
        for a, to_a, first in exits:
            for b, from_b, last in entries:
                total = to_a + self._dist[self._vindex[a], self._vindex[b]] + from_b
                if total <= d + TOLERANCE:
                    candidates.append([first] + self._vertex_path(a, b) + [last])

        def tie_key(route: List[Segment]):
            return tuple((s[0], s[1]) for s in route if abs(s[3] - s[2]) > TOLERANCE)

        return min(candidates, key=tie_key)

    def geodesic_point(self, p: GraphPoint, q: GraphPoint, t: float) -> GraphPoint:
        """
        Point at distance t from p along the tie-broken geodesic to q

        Among shortest routes the one whose (edge id, direction) sequence is
        lexicographically least is used, so the result is deterministic.
        """
        p, q = self.canonical(p), self.canonical(q)
        d = self.distance(p, q)
        if p == q or d <= TOLERANCE:
            return p
        remaining = min(max(float(t), 0.0), d)
        for edge_id, direction, start, end in self._route(p, q, d):
            span = abs(end - start)
            if remaining <= span:
                offset = start + remaining if direction == 0 else start - remaining
                e = self._edge_by_id[edge_id]
                return self.point(edge_id, min(max(offset, 0.0), e.length))
            remaining -= span
        return q

    def midpoint(self, p: GraphPoint, q: GraphPoint) -> GraphPoint:
        """Midpoint on the tie-broken geodesic; p itself when p = q"""
        return self.geodesic_point(p, q, self.distance(p, q) / 2.0)

    def __repr__(self) -> str:
        return f"MetricGraph(vertices={len(self._vertices)}, edges={len(self._edges)})"


class Net:
    """
    A finite point set covering the graph

    resolution is the covering radius guaranteed by the subdivision:
    half of the longest subdivision step.
    """

    def __init__(self, graph: MetricGraph, points: Iterable[GraphPoint],
                 resolution: float, segments: Dict[int, int]):
        self.graph = graph
        self.points: Tuple[GraphPoint, ...] = tuple(sorted(set(points)))
        self.resolution = float(resolution)
        self.segments = dict(segments)
        self._index: Dict[GraphPoint, int] = {p: i for i, p in enumerate(self.points)}
        self.arrays = graph.point_arrays(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: GraphPoint) -> bool:
        return p in self._index

    def index_of(self, p: GraphPoint) -> int:
        try:
            return self._index[self.graph.canonical(p)]
        except KeyError:
            raise DomainError(f"{p!r} is not a net point") from None

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        return self.graph.pairwise_distances(self.points)

    def distances_from(self, p: GraphPoint) -> np.ndarray:
        return self.graph.distances_to(p, self.arrays)

    def snap(self, p: GraphPoint) -> Tuple[int, float]:
        """Nearest net point index and its distance; ties go to the lower index"""
        p = self.graph.canonical(p)
        if p in self._index:
            return self._index[p], 0.0
        distances = self.distances_from(p)
        i = int(np.argmin(distances))
        return i, float(distances[i])

    @property
    def vertex_indices(self) -> List[int]:
        return [self._index[self.graph.vertex_point(v)] for v in self.graph.vertices]


def build_net(g: MetricGraph, r: float, segments: Optional[Dict[int, int]] = None) -> Net:
    """
    Subdivide every edge into equal steps of length at most r

    segments may fix the step count per edge id; nets with the same counts
    on graphs of the same combinatorics correspond point by point.
    """
    if r <= 0:
        raise DomainError(f"net resolution must be positive, got {r}")
    counts: Dict[int, int] = {}
    points = set()
    for e in g.edges:
        if segments is not None and e.edge_id in segments:
            k = int(segments[e.edge_id])
        else:
            k = max(1, int(math.ceil(e.length / r - TOLERANCE)))
        counts[e.edge_id] = k
        for j in range(k + 1):
            points.add(g.point(e.edge_id, e.length * j / k))
    resolution = max(e.length / counts[e.edge_id] for e in g.edges) / 2.0
    return Net(g, points, resolution, counts)


# ----------------------------------------------------------------------
# Example families
# ----------------------------------------------------------------------

def _require_positive(*values: float) -> None:
    for value in values:
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"parameter must be positive and finite, got {value}")


def make_circle(a: float) -> MetricGraph:
    """One vertex with a self-loop of length a"""
    _require_positive(a)
    return MetricGraph([0], [(0, 0, 0, a)])


def make_segment(length: float) -> MetricGraph:
    _require_positive(length)
    return MetricGraph([0, 1], [(0, 0, 1, length)])


def make_star(lengths: Sequence[float]) -> MetricGraph:
    """A tree: leaves 1..k joined to the centre 0"""
    if not lengths:
        raise DomainError("a star needs at least one arm")
    _require_positive(*lengths)
    return MetricGraph(range(len(lengths) + 1),
                       [(i, 0, i + 1, length) for i, length in enumerate(lengths)])


def make_wedge(lengths: Sequence[float]) -> MetricGraph:
    """Loops of the given lengths joined at vertex 0"""
    if not lengths:
        raise DomainError("a wedge needs at least one loop")
    _require_positive(*lengths)
    return MetricGraph([0], [(i, 0, 0, length) for i, length in enumerate(lengths)])


def make_hawaiian_stage(k: int) -> MetricGraph:
    """Wedge of loops of lengths 1, 1/2, ..., 1/2^(k-1)"""
    if int(k) != k or k < 1:
        raise DomainError(f"stage must be a positive integer, got {k}")
    return make_wedge([1.0 / 2 ** j for j in range(int(k))])


def make_torus_grid(a: float, b: float, n: int) -> MetricGraph:
    """
    n x n quotient grid with horizontal circumference 3a and vertical 3b

    Vertex (i, j) has id i*n + j; the horizontal edge leaving it has id
    i*n + j and the vertical one n*n + i*n + j.
    """
    _require_positive(a, b)
    if int(n) != n or n < 3:
        raise DomainError(f"grid size must be an integer >= 3, got {n}")
    n = int(n)
    vertices = range(n * n)
    edges = []
    for i in range(n):
        for j in range(n):
            v = i * n + j
            edges.append((v, v, i * n + (j + 1) % n, 3.0 * a / n))
            edges.append((n * n + v, v, ((i + 1) % n) * n + j, 3.0 * b / n))
    return MetricGraph(vertices, edges)


def scaled(g: MetricGraph, c: float) -> MetricGraph:
    """Same combinatorics with every length multiplied by c"""
    _require_positive(c)
    return MetricGraph(g.vertices, [(e.edge_id, e.tail, e.head, e.length * c) for e in g.edges])
