"""
Sigma-Isometries
Parameter-scaling maps between graphs of equal combinatorics, their induced maps on
covers, and the first-degree distortion bound those induced maps satisfy
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from chains.chain import Chain, refine_to_scale
from config.constants import EMOJI_COMPLETE, EMOJI_INCOMPLETE, EMOJI_WARNING, TOLERANCE
from config.errors import DomainError, PremiseError
from config.run_config import SearchBudget
from covers.cover_ball import CoverBall, cover_ball
from engine.homotopy import HomotopyEngine
from geometry.metric_graph import GraphPoint, MetricGraph, Net, build_net
from spectrum.critical import critical_spectrum

logger = logging.getLogger(__name__)

# Cover-ball nodes compared by the distortion check
MAX_SAMPLED_NODES = 60


@dataclass(frozen=True)
class DistortionPolynomial:
    """t -> m*t + b with nonnegative coefficients"""
    m: float
    b: float

    def __post_init__(self):
        if self.m < 0 or self.b < 0:
            raise DomainError(f"distortion coefficients must be nonnegative, got m={self.m}, b={self.b}")

    def __call__(self, t: float) -> float:
        return self.m * t + self.b

    @classmethod
    def from_sigma(cls, sigma: float, eps: float) -> 'DistortionPolynomial':
        """Bound inherited by the induced map between covers of a sigma-isometry"""
        if sigma < 0 or eps <= 0:
            raise DomainError(f"need sigma >= 0 and eps > 0, got {sigma} and {eps}")
        return cls(
            m=sigma * (4.0 / eps + 16.0 * sigma / eps ** 2),
            b=sigma * (4.0 * sigma / eps + 1.0),
        )

    def to_dict(self) -> Dict[str, float]:
        return {'m': self.m, 'b': self.b}


@dataclass
class SigmaIsometry:
    """
    Basepoint-preserving map rescaling each edge to its counterpart

    The nets correspond point by point; m and b are measured on them, so
    |d(x, y) - d(f(x), f(y))| <= m*d(x, y) + b holds on all net pairs and
    every target net point lies within b of the image.
    """
    source: MetricGraph
    target: MetricGraph
    source_net: Net
    target_net: Net
    m: float
    b: float
    images: List[int] = field(default_factory=list, repr=False)
    max_states: Optional[int] = None

    def __call__(self, p: GraphPoint) -> GraphPoint:
        p = self.source.canonical(p)
        ratio = self.target.edge(p.edge).length / self.source.edge(p.edge).length
        return self.target.point(p.edge, p.offset * ratio)

    @property
    def polynomial(self) -> DistortionPolynomial:
        return DistortionPolynomial(self.m, self.b)

    @property
    def sigma(self) -> float:
        """Constant distortion bound over the whole source"""
        return self.m * self.source.diameter + self.b

    @property
    def resolution_error(self) -> float:
        return self.source_net.resolution + self.target_net.resolution

    @cached_property
    def source_engine(self) -> HomotopyEngine:
        return HomotopyEngine(self.source_net, max_states=self.max_states)

    @cached_property
    def target_engine(self) -> HomotopyEngine:
        return HomotopyEngine(self.target_net, basepoint=self(self.source_engine.basepoint),
                              max_states=self.max_states)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'm': self.m,
            'b': self.b,
            'sigma': self.sigma,
            'source_resolution': self.source_net.resolution,
            'target_resolution': self.target_net.resolution,
        }


def scaling_sigma_isometry(source: MetricGraph, target: MetricGraph, resolution: float,
                           max_states: Optional[int] = None) -> SigmaIsometry:
    """
    Edge-proportional map between two members of one family

    Raises:
        DomainError: the graphs do not share vertices and edges
    """
    if not source.same_combinatorics(target):
        raise DomainError("scaling maps need graphs of the same combinatorics (same family and grid size)")
    source_net = build_net(source, resolution)
    target_net = build_net(target, resolution, segments=source_net.segments)
    images = [target_net.index_of(
        target.point(p.edge, p.offset * target.edge(p.edge).length / source.edge(p.edge).length))
        for p in source_net.points]

    ds = source_net.distance_matrix
    dt = target_net.distance_matrix[np.ix_(images, images)]
    positive = ds > TOLERANCE
    m = float((np.abs(ds - dt)[positive] / ds[positive]).max()) if positive.any() else 0.0
    missed = sorted(set(range(len(target_net))) - set(images))
    b = float(target_net.distance_matrix[np.ix_(missed, images)].min(axis=1).max()) if missed else 0.0
    if m < TOLERANCE:
        m = 0.0
    f = SigmaIsometry(source, target, source_net, target_net, m, b, images, max_states)
    logger.info(f"{EMOJI_COMPLETE} scaling map measured: m {m:.6g}, b {b:.6g}, sigma {f.sigma:.6g}")
    return f


def induced_map(f: SigmaIsometry, chain: Chain, eps: float) -> Chain:
    """
    Pointwise image of a chain, read as an eps-chain in the target

    Raises:
        DomainError: a gap g of the chain has g + m*g + b >= eps
    """
    if chain.graph is not f.source:
        raise DomainError("chain does not live on the source graph of the map")
    for k, gap in enumerate(chain.gaps):
        if gap + f.m * gap + f.b >= eps - TOLERANCE:
            raise DomainError(
                f"gap {k} of length {gap:.12g} may grow to {gap + f.m * gap + f.b:.12g}, not below {eps:.12g}")
    return Chain(tuple(f(p) for p in chain.points), eps, f.target)


def refine_for_map(f: SigmaIsometry, chain: Chain, eps: float) -> Chain:
    """Subdivide a chain so that induced_map at eps is defined on it"""
    safe = min(chain.scale, (eps - f.b) / (1.0 + f.m)) - 10 * TOLERANCE
    if safe <= 0:
        raise DomainError(f"additive distortion {f.b:.6g} leaves no room below scale {eps:.6g}")
    return refine_to_scale(chain, safe)


def default_omega0(eps: float, target_critical: Sequence[float]) -> float:
    below = [v for v in target_critical if v < eps - TOLERANCE]
    return max([eps / 2.0] + below) + 1e3 * TOLERANCE


def premises(f: SigmaIsometry, delta: float, eps: float, target_critical: Sequence[float],
             omega0: Optional[float] = None) -> Dict[str, bool]:
    """Each inequality the distortion bound rests on, with whether it holds"""
    omega0 = default_omega0(eps, target_critical) if omega0 is None else omega0
    sigma = f.sigma
    return {
        'eps/2 < omega0': eps / 2.0 < omega0,
        'omega0 < delta': omega0 < delta,
        'delta < eps': delta < eps,
        'no target critical value in [omega0, eps)': not any(
            omega0 - TOLERANCE <= v < eps - TOLERANCE for v in target_critical),
        'sigma < eps - delta': sigma < eps - delta,
        'sigma < (delta - omega0)/4': sigma < (delta - omega0) / 4.0,
    }


@dataclass
class PIsometryReport:
    """Observed cover-ball distortion of an induced map against its polynomial bound"""
    delta: float
    eps: float
    radius: float
    sigma: float
    omega0: float
    polynomial: DistortionPolynomial
    premises: Dict[str, bool]
    max_ratio: float = 0.0
    max_excess: float = 0.0
    pairs_checked: int = 0
    unmapped: int = 0
    holds: bool = True

    @property
    def premises_hold(self) -> bool:
        return all(self.premises.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'delta': self.delta,
            'eps': self.eps,
            'radius': self.radius,
            'sigma': self.sigma,
            'omega0': self.omega0,
            'polynomial': self.polynomial.to_dict(),
            'premises': dict(self.premises),
            'premises_hold': self.premises_hold,
            'max_ratio': self.max_ratio,
            'max_excess': self.max_excess,
            'pairs_checked': self.pairs_checked,
            'unmapped': self.unmapped,
            'holds': self.holds,
        }


def _sample(nodes: List[int], limit: int = MAX_SAMPLED_NODES) -> List[int]:
    if len(nodes) <= limit:
        return list(nodes)
    stride = len(nodes) / float(limit)
    return sorted({nodes[int(k * stride)] for k in range(limit)} | {nodes[0]})


def map_ball_nodes(f: SigmaIsometry, source_ball: CoverBall, target_ball: CoverBall,
                   nodes: Sequence[int]) -> Dict[int, int]:
    """Source node -> target node of the image of its representative; unlocated nodes are left out"""
    mapping: Dict[int, int] = {}
    for node in nodes:
        chain = refine_for_map(f, source_ball.representative(node), target_ball.eps)
        located = target_ball.locate(induced_map(f, chain, target_ball.eps))
        if located is not None:
            mapping[node] = located
    return mapping


def check_p_isometry(f: SigmaIsometry, delta: float, eps: float, radius: float,
                     budget: Optional[SearchBudget] = None,
                     strict: bool = True,
                     target_critical: Optional[Sequence[float]] = None,
                     omega0: Optional[float] = None) -> PIsometryReport:
    """
    Compare cover-ball distances of the delta-cover of the source with
    those of their images in the eps-cover of the target

    Target critical values default to a scan of [eps/2, eps]. With
    strict=False violated premises are reported instead of raised.

    Raises:
        PremiseError: strict and some premise fails; names the inequality
    """
    if target_critical is None:
        scan = critical_spectrum(f.target_engine, eps_min=eps / 2.0, eps_max=eps, budget=budget)
        target_critical = scan.values
    omega0 = default_omega0(eps, target_critical) if omega0 is None else omega0
    checks = premises(f, delta, eps, target_critical, omega0)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        if strict:
            raise PremiseError(failed[0], f"premise violated: {failed[0]} "
                                          f"(sigma {f.sigma:.6g}, delta {delta:.6g}, eps {eps:.6g}, omega0 {omega0:.6g})")
        logger.warning(f"{EMOJI_WARNING} premises fail ({', '.join(failed)}); measuring distortion anyway")

    polynomial = DistortionPolynomial.from_sigma(f.sigma, eps)
    report = PIsometryReport(delta=delta, eps=eps, radius=radius, sigma=f.sigma, omega0=omega0,
                             polynomial=polynomial, premises=checks)

    source_ball = cover_ball(f.source_engine, delta, radius, budget=budget)
    target_ball = cover_ball(f.target_engine, eps, polynomial(radius) + radius + f.resolution_error, budget=budget)
    nodes = _sample(source_ball.ball)
    mapping = map_ball_nodes(f, source_ball, target_ball, nodes)
    report.unmapped = len(nodes) - len(mapping)

    mapped = sorted(mapping)
    ds = source_ball.distance_matrix(mapped)
    dt = target_ball.distance_matrix([mapping[n] for n in mapped])
    error = 2.0 * f.resolution_error
    upper = np.triu_indices(len(mapped), k=1)
    gaps = np.abs(ds - dt)[upper]
    allowed = polynomial.m * ds[upper] + polynomial.b + error
    report.pairs_checked = int(len(gaps))
    if len(gaps):
        report.max_ratio = float((gaps / allowed).max())
        report.max_excess = float((gaps - allowed).max())
    report.holds = report.unmapped == 0 and report.max_ratio <= 1.0 + TOLERANCE

    prefix = EMOJI_COMPLETE if report.holds else EMOJI_INCOMPLETE
    logger.info(f"{prefix} p-isometry check delta {delta:.6g} -> eps {eps:.6g}: "
                f"{report.pairs_checked} pairs, max ratio {report.max_ratio:.4g}, {report.unmapped} unmapped")
    return report
