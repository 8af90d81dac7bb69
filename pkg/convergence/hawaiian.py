"""
Hawaiian Stage Demo
Basepoint valency and critical values above a floor for wedges of loops 1, 1/2, ..., 1/2^(k-1)
"""

import logging
from typing import Any, Dict, List, Optional

from config.constants import DEFAULT_EPS_MIN_FACTOR, EMOJI_COMPLETE, EMOJI_PROCESSING
from config.errors import DomainError
from engine.homotopy import HomotopyEngine
from geometry.metric_graph import build_net, make_hawaiian_stage
from spectrum.critical import critical_spectrum

logger = logging.getLogger(__name__)


def hawaiian_valency_demo(stages: int, floor: float, resolution: float,
                          max_states: Optional[int] = None,
                          workers: Optional[int] = None) -> List[Dict[str, Any]]:
    """
    One row per stage k: valency 2k at the wedge point and the critical
    values found at or above floor

    The valency grows without bound while the spectrum above a fixed floor
    stabilises, which is what prevents a common cover at small scales.
    """
    if stages < 1:
        raise DomainError(f"stages must be positive, got {stages}")
    if floor <= 0 or resolution <= 0:
        raise DomainError("floor and resolution must be positive")
    rows = []
    for k in range(1, stages + 1):
        graph = make_hawaiian_stage(k)
        net = build_net(graph, resolution)
        eps_min = max(floor, DEFAULT_EPS_MIN_FACTOR * net.resolution)
        logger.info(f"{EMOJI_PROCESSING} Hawaiian stage {k}: scanning from {eps_min:.6g}")
        report = critical_spectrum(HomotopyEngine(net, max_states=max_states),
                                   eps_min=eps_min, eps_max=graph.diameter, workers=workers)
        rows.append({
            'stage': k,
            'valency': graph.degree(graph.vertices[0]),
            'floor': eps_min,
            'critical_values': report.values,
            'multiplicities': [e.multiplicity for e in report.entries],
            'certain': report.is_certain,
        })
        logger.info(f"{EMOJI_COMPLETE} stage {k}: valency {rows[-1]['valency']}, "
                    f"{len(report.entries)} critical values above the floor")
    return rows
