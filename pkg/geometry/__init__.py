"""
Geometry package
"""

from .metric_graph import (
    Edge,
    GraphPoint,
    MetricGraph,
    Net,
    build_net,
    make_circle,
    make_segment,
    make_star,
    make_wedge,
    make_hawaiian_stage,
    make_torus_grid,
    scaled,
)
from .graph_io import parse_graph_text, load_graph, graph_to_text, graph_from_spec

__all__ = [
    'Edge', 'GraphPoint', 'MetricGraph', 'Net', 'build_net', 'make_circle',
    'make_segment', 'make_star', 'make_wedge', 'make_hawaiian_stage',
    'make_torus_grid', 'scaled', 'parse_graph_text', 'load_graph',
    'graph_to_text', 'graph_from_spec',
]
