"""
Graph text format
One declaration per line: 'v <id>' or 'e <id> <v1> <v2> <length>'; '#' starts a comment
"""

import logging
import math
from typing import Dict, List, Tuple

import networkx as nx

from config.errors import GraphParseError, DomainError
from config.enums import GraphFamily
from config.run_config import GraphSpec
from geometry.metric_graph import (
    MetricGraph,
    make_circle,
    make_hawaiian_stage,
    make_segment,
    make_star,
    make_torus_grid,
    make_wedge,
)

logger = logging.getLogger(__name__)


def _parse_int(token: str, line_number: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphParseError(line_number, f"{what} must be an integer, got {token!r}") from None


def parse_graph_text(text: str) -> MetricGraph:
    """
    Parse the text graph format

    Raises:
        GraphParseError: malformed lines, unknown vertices, nonpositive
            lengths, or a disconnected graph (reported at the declaration of
            the first unreachable vertex)
    """
    vertex_lines: Dict[int, int] = {}
    edge_ids = set()
    edges: List[Tuple[int, int, int, float]] = []
    last_line = 0

    for line_number, raw in enumerate(text.splitlines(), start=1):
        last_line = line_number
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == 'v':
            if len(parts) != 2:
                raise GraphParseError(line_number, "vertex declaration is 'v <id>'")
            vertex = _parse_int(parts[1], line_number, "vertex id")
            if vertex in vertex_lines:
                raise GraphParseError(line_number, f"duplicate vertex {vertex}")
            vertex_lines[vertex] = line_number
        elif kind == 'e':
            if len(parts) != 5:
                raise GraphParseError(line_number, "edge declaration is 'e <id> <v1> <v2> <length>'")
            edge_id = _parse_int(parts[1], line_number, "edge id")
            v1 = _parse_int(parts[2], line_number, "vertex id")
            v2 = _parse_int(parts[3], line_number, "vertex id")
            try:
                length = float(parts[4])
            except ValueError:
                raise GraphParseError(line_number, f"length must be a number, got {parts[4]!r}") from None
            if edge_id in edge_ids:
                raise GraphParseError(line_number, f"duplicate edge {edge_id}")
            for v in (v1, v2):
                if v not in vertex_lines:
                    raise GraphParseError(line_number, f"edge {edge_id} uses undeclared vertex {v}")
            if not math.isfinite(length) or length <= 0:
                raise GraphParseError(line_number, f"edge {edge_id} has nonpositive length {parts[4]}")
            edge_ids.add(edge_id)
            edges.append((edge_id, v1, v2, length))
        else:
            raise GraphParseError(line_number, f"unknown declaration {kind!r}")

    if not vertex_lines:
        raise GraphParseError(max(last_line, 1), "graph declares no vertices")
    if not edges:
        raise GraphParseError(max(last_line, 1), "graph declares no edges")

    multigraph = nx.MultiGraph()
    multigraph.add_nodes_from(vertex_lines)
    multigraph.add_edges_from((v1, v2) for _, v1, v2, _ in edges)
    first = min(vertex_lines, key=vertex_lines.get)
    reachable = nx.node_connected_component(multigraph, first)
    unreachable = [v for v in vertex_lines if v not in reachable]
    if unreachable:
        v = min(unreachable, key=vertex_lines.get)
        raise GraphParseError(vertex_lines[v], f"graph is disconnected: vertex {v} is unreachable")

    return MetricGraph(vertex_lines.keys(), edges)


def load_graph(file_path: str) -> MetricGraph:
    with open(file_path, 'r', encoding='utf-8') as f:
        graph = parse_graph_text(f.read())
    logger.info(f"Loaded graph from {file_path}: {graph!r}")
    return graph


def graph_to_text(g: MetricGraph) -> str:
    lines = [f"v {v}" for v in g.vertices]
    lines += [f"e {e.edge_id} {e.tail} {e.head} {e.length:.12g}" for e in g.edges]
    return "\n".join(lines) + "\n"


def graph_from_spec(spec: GraphSpec) -> MetricGraph:
    """Build a named generator, e.g. GraphSpec.from_string('torus:1/3,1/3,12')"""
    params = spec.params
    if spec.family == GraphFamily.CIRCLE:
        return make_circle(params[0])
    if spec.family == GraphFamily.TORUS:
        if len(params) != 3:
            raise DomainError("torus takes a,b,n")
        return make_torus_grid(params[0], params[1], int(params[2]))
    if spec.family == GraphFamily.WEDGE:
        return make_wedge(params)
    if spec.family == GraphFamily.HAWAIIAN:
        return make_hawaiian_stage(int(params[0]))
    if spec.family == GraphFamily.SEGMENT:
        return make_segment(params[0])
    if spec.family == GraphFamily.STAR:
        return make_star(params)
    raise DomainError(f"unsupported family {spec.family.value}")
