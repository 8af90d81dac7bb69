"""
Critical Spectrum
Homotopy critical values with multiplicity, and the covering spectrum derived from them
"""

import logging
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from config.constants import (
    COVERING_SPECTRUM_FACTOR,
    DEFAULT_EPS_MIN_FACTOR,
    DEFAULT_ETA_FACTOR,
    EMOJI_COMPLETE,
    EMOJI_PROCESSING,
    EMOJI_WARNING,
    TOLERANCE,
)
from config.enums import Certainty, Equivalence, GroupKind
from config.errors import DomainError
from config.run_config import SearchBudget, env_workers
from engine.homotopy import HomotopyEngine
from spectrum.triads import Triad, TriadVerdict, classify_triad, equivalent_triads, near_equilateral

logger = logging.getLogger(__name__)


@dataclass
class SpectrumEntry:
    """One critical value: side of its essential triads, class count and representatives"""
    value: float
    multiplicity: int
    certainty: Certainty
    error: float
    representatives: List[Triad] = field(default_factory=list)
    classes: List[List[int]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': self.value,
            'multiplicity': self.multiplicity,
            'certainty': self.certainty.value,
            'error': self.error,
            'representatives': [t.to_dict() for t in self.representatives],
            'classes': self.classes,
        }


@dataclass
class SpectrumReport:
    """Critical values sorted descending, plus clusters left undecided"""
    entries: List[SpectrumEntry]
    eps_min: float
    eps_max: float
    eta: float
    resolution: float
    unresolved: List[Tuple[float, float]] = field(default_factory=list)

    @property
    def values(self) -> List[float]:
        return [e.value for e in self.entries]

    @property
    def is_certain(self) -> bool:
        return not self.unresolved and all(e.certainty == Certainty.CERTAIN for e in self.entries)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'entries': [e.to_dict() for e in self.entries],
            'eps_min': self.eps_min,
            'eps_max': self.eps_max,
            'eta': self.eta,
            'resolution': self.resolution,
            'unresolved': [list(u) for u in self.unresolved],
        }


def _clusters(triads: List[Triad], width: float) -> List[List[Triad]]:
    """Greedy clusters of sides: each starts at the smallest unclaimed side and spans width"""
    ordered = sorted(triads, key=lambda t: (t.side, t.indices))
    clusters: List[List[Triad]] = []
    start = None
    for t in ordered:
        if start is None or t.side > start + width + TOLERANCE:
            clusters.append([])
            start = t.side
        clusters[-1].append(t)
    return clusters


def _by_side(cluster: List[Triad]) -> "OrderedDict[float, List[Triad]]":
    groups: "OrderedDict[float, List[Triad]]" = OrderedDict()
    for t in cluster:
        key = next((s for s in groups if abs(s - t.side) <= TOLERANCE), t.side)
        groups.setdefault(key, []).append(t)
    return groups


def _group_classes(engine: HomotopyEngine, essentials: List[TriadVerdict],
                   budget: Optional[SearchBudget]) -> Tuple[List[List[TriadVerdict]], bool]:
    """Equivalence classes of essential triads; the flag is False if any equivalence was heuristic"""
    classes: "OrderedDict[Tuple, List[TriadVerdict]]" = OrderedDict()
    for v in essentials:
        classes.setdefault(v.class_key, []).append(v)
    certain = True
    for members in classes.values():
        representative = members[0].triad
        for other in members[1:]:
            if other.triad.point_set == representative.point_set:
                continue
            if equivalent_triads(engine, representative, other.triad, budget) == Equivalence.HEURISTIC_EQUAL:
                certain = False
                break
    return list(classes.values()), certain


def critical_spectrum(engine: HomotopyEngine,
                      eps_min: Optional[float] = None,
                      eps_max: Optional[float] = None,
                      eta: Optional[float] = None,
                      budget: Optional[SearchBudget] = None,
                      workers: Optional[int] = None) -> SpectrumReport:
    """
    Scan clustered near-equilateral side lengths for essential triads

    Within a cluster of width 2*eta the sides are visited in increasing
    order and the first side carrying essential triads is the critical
    value. Its multiplicity is the number of equivalence classes there.
    """
    net = engine.net
    resolution = net.resolution
    eta = DEFAULT_ETA_FACTOR * resolution if eta is None else float(eta)
    eps_min = DEFAULT_EPS_MIN_FACTOR * resolution if eps_min is None else float(eps_min)
    eps_max = engine.graph.diameter if eps_max is None else float(eps_max)
    if eps_min <= 2 * resolution:
        raise DomainError(f"eps_min {eps_min:.6g} must exceed twice the net resolution {resolution:.6g}")
    if eps_max < eps_min:
        raise DomainError(f"empty scan range [{eps_min}, {eps_max}]")
    workers = workers or env_workers()

    candidates = near_equilateral(net, eps_min, eps_max, eta)
    clusters = _clusters(candidates, 2 * eta)
    logger.info(f"{EMOJI_PROCESSING} Spectrum scan [{eps_min:.6g}, {eps_max:.6g}]: "
                f"{len(candidates)} near-equilateral triples in {len(clusters)} clusters")

    entries: List[SpectrumEntry] = []
    unresolved: List[Tuple[float, float]] = []
    # groups at larger scales are quotients, so a trivial group ends the scan
    trivial_from: Optional[float] = None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for cluster in clusters:
            if trivial_from is not None:
                break
            saw_unknown = False
            found: Optional[Tuple[float, List[TriadVerdict]]] = None
            for side, triads in _by_side(cluster).items():
                if engine.group(side).kind == GroupKind.TRIVIAL:
                    trivial_from = side
                    logger.info(f"{EMOJI_COMPLETE} group trivial from {side:.6g}; no larger critical values")
                    break
                verdicts = list(pool.map(lambda t: classify_triad(engine, t, budget), triads))
                saw_unknown = saw_unknown or any(v.essential is None for v in verdicts)
                essentials = [v for v in verdicts if v.essential]
                if essentials:
                    found = (side, essentials)
                    break
            if found is None:
                if saw_unknown:
                    span = (cluster[0].side, cluster[-1].side)
                    logger.warning(f"{EMOJI_WARNING} cluster {span} undecided: Unknown verdicts and no essential triad")
                    unresolved.append(span)
                continue
            side, essentials = found
            classes, equivalence_certain = _group_classes(engine, essentials, budget)
            certain = equivalence_certain and not saw_unknown
            entries.append(SpectrumEntry(
                value=side,
                multiplicity=len(classes),
                certainty=Certainty.CERTAIN if certain else Certainty.HEURISTIC,
                error=eta + resolution,
                representatives=[members[0].triad for members in classes],
                classes=[members[0].certificate.canonical_sign().to_list() for members in classes],
            ))
            logger.info(f"{EMOJI_COMPLETE} critical value {side:.6g} multiplicity {len(classes)}")

    entries.sort(key=lambda e: -e.value)
    return SpectrumReport(entries, eps_min, eps_max, eta, resolution, unresolved)


def covering_spectrum(report: SpectrumReport) -> List[Tuple[float, int]]:
    """Covering spectrum values with multiplicities: critical values times 3/2"""
    return [(COVERING_SPECTRUM_FACTOR * e.value, e.multiplicity) for e in report.entries]
