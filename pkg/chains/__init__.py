"""
Chains package
"""

from .chain import (
    Move,
    Chain,
    Homotopy,
    apply_move,
    length,
    concat,
    reverse,
    gap_excess,
    deviation,
    refined_polygon,
    geodesic_chain,
    midpoint_refinement,
    refine_to_scale,
    normalize_count,
    snap_moves,
    snap_homotopy,
    chain_to_json,
    chain_from_json,
)

__all__ = [
    'Move', 'Chain', 'Homotopy', 'apply_move', 'length', 'concat', 'reverse',
    'gap_excess', 'deviation', 'refined_polygon', 'geodesic_chain',
    'midpoint_refinement', 'refine_to_scale', 'normalize_count', 'snap_moves',
    'snap_homotopy', 'chain_to_json', 'chain_from_json',
]
