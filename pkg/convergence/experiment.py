"""
Convergence Experiment
LangGraph pipeline comparing cover balls of a converging sequence of graphs with
the matching balls of the limit: prepare -> legs -> limit -> compare -> verdicts -> assemble
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

from langgraph.graph import END, StateGraph

from config.constants import (
    DEFAULT_EPS_MIN_FACTOR,
    EMOJI_COMPLETE,
    EMOJI_PROCESSING,
    EMOJI_SUCCESS,
    EMOJI_WARNING,
    EXACT_GH_MAX_POINTS,
    FORMAT_VERSION,
    STATUS_COMPLETED,
    STATUS_ERROR,
    STATUS_IN_PROGRESS,
    TOLERANCE,
)
from config.enums import GraphFamily
from config.errors import DomainError, UnresolvedVerdictError
from config.run_config import ExperimentConfig
from convergence.experiment_state import ComparisonRow, ExperimentState, LegResult, LimitResult, create_initial_state
from convergence.gh import distortion, gh_bounds, gh_distance_exact
from convergence.sigma_isometry import SigmaIsometry, check_p_isometry, map_ball_nodes, scaling_sigma_isometry
from covers.cover_ball import CoverBall, cover_ball, quotient_group_invariants
from covers.kernel import KernelSpec
from engine.homotopy import HomotopyEngine
from geometry.metric_graph import MetricGraph, build_net, make_circle, make_torus_grid
from spectrum.critical import critical_spectrum
from spectrum.triads import Triad, classify_triad, triad_from_points

logger = logging.getLogger(__name__)

RECURSION_LIMIT = 50


def family_member(config: ExperimentConfig, i: int) -> MetricGraph:
    """circle of circumference 1 - 1/i, or the (1 - 1/i) x (1 + 1/i) grid torus"""
    if config.family == GraphFamily.CIRCLE:
        return make_circle(1.0 - 1.0 / i)
    return make_torus_grid((1.0 - 1.0 / i) / 3.0, (1.0 + 1.0 / i) / 3.0, config.torus_n)


def family_limit(config: ExperimentConfig) -> MetricGraph:
    if config.family == GraphFamily.CIRCLE:
        return make_circle(1.0)
    return make_torus_grid(1.0 / 3.0, 1.0 / 3.0, config.torus_n)


def first_index_holding(flags: List[Tuple[int, bool]]) -> Optional[int]:
    """Smallest index from which the flag holds for every later index; None if the last fails"""
    first = None
    for i, ok in sorted(flags):
        if not ok:
            first = None
        elif first is None:
            first = i
    return first


class ConvergenceExperiment:
    """
    One run of a convergence experiment

    Heavy intermediates (cover balls, distance matrices, scaling maps)
    stay on the instance; the graph state carries only plain results.
    """

    def __init__(self, config: ExperimentConfig):
        self.logger = logging.getLogger(__name__)
        self.config = config
        self.limit_graph = family_limit(config)
        self.limit_engine: Optional[HomotopyEngine] = None
        self.limit_critical: List[float] = []
        self._maps: Dict[int, SigmaIsometry] = {}
        self._leg_balls: Dict[int, CoverBall] = {}
        self._leg_triads: Dict[int, List[Triad]] = {}
        self._limit_balls: List[CoverBall] = []
        self._failure: Optional[Exception] = None

        self.graph = self._build_graph()

    def _build_graph(self) -> StateGraph:
        """Build the LangGraph workflow"""
        workflow = StateGraph(ExperimentState)

        # Add nodes
        workflow.add_node("prepare", self._prepare_node)
        workflow.add_node("legs_step", self._legs_node)  # node ids may not reuse state keys
        workflow.add_node("limit", self._limit_node)
        workflow.add_node("compare", self._compare_node)
        workflow.add_node("verdicts", self._verdicts_node)
        workflow.add_node("assemble", self._assemble_node)

        # Set entry point
        workflow.set_entry_point("prepare")

        # Each step continues unless it recorded an error
        steps = ["prepare", "legs_step", "limit", "compare", "verdicts", "assemble"]
        for current, following in zip(steps, steps[1:]):
            workflow.add_conditional_edges(
                current,
                self._router,
                {
                    "continue": following,
                    END: END
                }
            )
        workflow.add_edge("assemble", END)

        return workflow.compile()

    def _router(self, state: ExperimentState) -> str:
        """Stop at the first failed step"""
        if state.get("has_errors", False):
            return END
        return "continue"

    def _fail(self, step: str, error: Exception) -> Dict[str, Any]:
        self._failure = error
        self.logger.error(f"Experiment step {step} failed: {error}", exc_info=True)
        return {
            'current_step': step,
            'status': STATUS_ERROR,
            'has_errors': True,
            'errors': [f"{step}: {error}"],
        }

    # ------------------------------------------------------------------
    # Nodes
    # ------------------------------------------------------------------

    def _prepare_node(self, state: ExperimentState) -> Dict[str, Any]:
        try:
            self.config.validate()
            self.logger.info(f"{EMOJI_PROCESSING} Convergence experiment: family {self.config.family.value}, "
                             f"indices {self.config.indices}, eps {self.config.eps:.6g}")
            return {'current_step': 'prepare', 'status': STATUS_IN_PROGRESS}
        except DomainError as e:
            return self._fail('prepare', e)

    def _run_leg(self, i: int) -> LegResult:
        cfg = self.config
        graph = family_member(cfg, i)
        f = scaling_sigma_isometry(graph, self.limit_graph, cfg.resolution, max_states=cfg.max_states)
        engine = f.source_engine

        triads: List[Triad] = []
        values: List[float] = []
        if cfg.triad_rule == "window":
            resolution = engine.net.resolution
            eps_min = max(cfg.eps - cfg.window, DEFAULT_EPS_MIN_FACTOR * resolution)
            eps_max = cfg.eps - 1e3 * TOLERANCE
            if eps_min < eps_max:
                scan = critical_spectrum(engine, eps_min=eps_min, eps_max=eps_max, eta=cfg.eta, workers=1)
                if scan.unresolved:
                    raise UnresolvedVerdictError(
                        f"index {i}: critical scan left clusters {scan.unresolved} undecided")
                values = scan.values
                triads = [t for entry in scan.entries for t in entry.representatives]

        ball = cover_ball(engine, cfg.eps, cfg.radius)
        rank, torsion = quotient_group_invariants(ball)
        self._maps[i] = f
        self._leg_balls[i] = ball
        self._leg_triads[i] = triads
        self.logger.info(f"{EMOJI_COMPLETE} leg {i}: sigma {f.sigma:.6g}, ball {len(ball.ball)} nodes, "
                         f"deck rank {rank} torsion {torsion}")
        return {
            'index': i,
            'scale': cfg.eps,
            'resolution': engine.net.resolution,
            'sigma': f.sigma,
            'm': f.m,
            'b': f.b,
            'deck_rank': rank,
            'deck_torsion': list(torsion),
            'ball_size': len(ball.ball),
            'window_values': list(values),
            'window_triads': [t.to_dict() for t in triads],
            'p_check': None,
        }

    def _legs_node(self, state: ExperimentState) -> Dict[str, Any]:
        try:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                legs = list(pool.map(self._run_leg, self.config.indices))
            return {'current_step': 'legs', 'legs': legs}
        except (DomainError, UnresolvedVerdictError) as e:
            return self._fail('legs', e)

    def _limit_kernel(self) -> KernelSpec:
        """Images of the last window triads under the scaling map, snapped and re-verified"""
        if self.config.triad_rule != "window":
            return KernelSpec()
        donors = [i for i in sorted(self._leg_triads) if self._leg_triads[i]]
        if not donors:
            self.logger.warning(f"{EMOJI_WARNING} no critical values in the window; limit kernel is empty")
            return KernelSpec()
        i = donors[-1]
        f = self._maps[i]
        net = self.limit_engine.net
        kernel = KernelSpec()
        for t in self._leg_triads[i]:
            snapped = [net.points[net.snap(f(p))[0]] for p in t.points]
            eta = t.eta + f.m * t.side + 2.0 * net.resolution
            image = triad_from_points(self.limit_graph, snapped, eta)
            verdict = classify_triad(self.limit_engine, image)
            if verdict.essential is None:
                raise UnresolvedVerdictError(f"limit triad {image.to_dict()} from index {i} is undecided")
            if verdict.essential:
                kernel.triads.append(image)
            else:
                self.logger.warning(f"{EMOJI_WARNING} limit image of a triad from index {i} is inessential; dropped")
        return kernel

    def _limit_node(self, state: ExperimentState) -> Dict[str, Any]:
        try:
            cfg = self.config
            net = build_net(self.limit_graph, cfg.net_resolution_limit)
            self.limit_engine = HomotopyEngine(net, max_states=cfg.max_states)
            if cfg.p_check_radius is not None:
                scan = critical_spectrum(self.limit_engine, eps_min=cfg.eps / 2.0, eps_max=cfg.eps, eta=cfg.eta)
                self.limit_critical = scan.values
            kernel = self._limit_kernel()
            limits: List[LimitResult] = []
            for scale in (cfg.limit_scales or [cfg.eps]):
                ball = cover_ball(self.limit_engine, scale, cfg.radius, kernel)
                rank, torsion = quotient_group_invariants(ball)
                self._limit_balls.append(ball)
                label = f"{'circle-cover' if len(kernel) else 'eps-cover'}@{scale:.6g}"
                limits.append({
                    'target': label,
                    'scale': scale,
                    'kernel_triads': [t.to_dict() for t in kernel.triads],
                    'deck_rank': rank,
                    'deck_torsion': list(torsion),
                    'ball_size': len(ball.ball),
                })
                self.logger.info(f"{EMOJI_COMPLETE} limit {label}: ball {len(ball.ball)} nodes, "
                                 f"deck rank {rank} torsion {torsion}")
            return {'current_step': 'limit', 'limits': limits}
        except (DomainError, UnresolvedVerdictError) as e:
            return self._fail('limit', e)

    def _compare_pair(self, leg: LegResult, limit_ball: CoverBall, limit: LimitResult) -> ComparisonRow:
        i = leg['index']
        leg_ball = self._leg_balls[i]
        f = self._maps[i]
        dx = leg_ball.distance_matrix()
        dy = limit_ball.distance_matrix()

        correspondence: Dict[int, int] = {}
        map_distortion = None
        try:
            mapping = map_ball_nodes(f, leg_ball, limit_ball, leg_ball.ball)
            source_pos = {node: k for k, node in enumerate(leg_ball.ball)}
            target_pos = {node: k for k, node in enumerate(limit_ball.ball)}
            correspondence = {source_pos[a]: target_pos[b] for a, b in mapping.items() if b in target_pos}
            if len(correspondence) > 1:
                map_distortion = distortion(dx, dy, sorted(correspondence.items()))
        except DomainError as e:
            self.logger.warning(f"{EMOJI_WARNING} natural map {i} -> {limit['target']} unavailable: {e}")

        if max(len(dx), len(dy)) <= EXACT_GH_MAX_POINTS:
            lower = upper = gh_distance_exact(dx, dy)
        else:
            lower, upper = gh_bounds(dx, dy, correspondence)
        return {
            'i': i,
            'target': limit['target'],
            'scale': limit['scale'],
            'gh_lower': lower,
            'gh_upper': upper,
            'map_distortion': map_distortion,
            'deck_rank': leg['deck_rank'],
            'deck_torsion': list(leg['deck_torsion']),
            'error': 2.0 * (leg_ball.net.resolution + limit_ball.net.resolution),
        }

    def _compare_node(self, state: ExperimentState) -> Dict[str, Any]:
        try:
            cfg = self.config
            rows: List[ComparisonRow] = []
            for limit_ball, limit in zip(self._limit_balls, state['limits']):
                for leg in state['legs']:
                    i = leg['index']
                    rows.append(self._compare_pair(leg, limit_ball, limit))
                    row = rows[-1]
                    self.logger.info(f"{EMOJI_COMPLETE} i={i} vs {limit['target']}: "
                                     f"GH in [{row['gh_lower']:.4g}, {row['gh_upper']:.4g}]")
            legs = [dict(leg) for leg in state['legs']]
            if cfg.p_check_radius is not None:
                for leg in legs:
                    report = check_p_isometry(self._maps[leg['index']], cfg.delta, cfg.eps, cfg.p_check_radius,
                                              strict=False, target_critical=self.limit_critical)
                    leg['p_check'] = report.to_dict()
            return {'current_step': 'compare', 'rows': rows, 'legs': legs}
        except (DomainError, UnresolvedVerdictError) as e:
            return self._fail('compare', e)

    def _verdicts_node(self, state: ExperimentState) -> Dict[str, Any]:
        """First index from which each inequality holds on the primary target"""
        limits = state['limits']
        primary = limits[0]['target']
        rows = sorted((r for r in state['rows'] if r['target'] == primary), key=lambda r: r['i'])
        resolution = self.config.resolution

        decreasing = []
        previous = None
        for r in rows:
            decreasing.append((r['i'], previous is None or r['gh_upper'] <= previous + TOLERANCE))
            previous = r['gh_upper']
        thresholds = {
            'gh_upper_decreasing': first_index_holding(decreasing),
            'gh_upper_within_3_over_i': first_index_holding(
                [(r['i'], r['gh_upper'] <= 3.0 / r['i'] + 2.0 * resolution) for r in rows]),
            'deck_matches_limit': first_index_holding(
                [(r['i'], r['deck_rank'] == limits[0]['deck_rank'] and r['deck_torsion'] == limits[0]['deck_torsion'])
                 for r in rows]),
        }
        checked = [leg for leg in state['legs'] if leg.get('p_check')]
        if checked:
            thresholds['p_isometry'] = first_index_holding(
                [(leg['index'], leg['p_check']['holds']) for leg in checked])
        for name, value in thresholds.items():
            self.logger.info(f"{EMOJI_COMPLETE} {name}: holds from index {value}")
        return {'current_step': 'verdicts', 'thresholds': thresholds}

    def _assemble_node(self, state: ExperimentState) -> Dict[str, Any]:
        report = {
            'format_version': FORMAT_VERSION,
            'config': state['config'],
            'legs': sorted(state['legs'], key=lambda leg: leg['index']),
            'limits': state['limits'],
            'rows': sorted(state['rows'], key=lambda r: (r['target'], r['i'])),
            'thresholds': state['thresholds'],
        }
        self.logger.info(f"{EMOJI_SUCCESS} Experiment complete: {len(report['rows'])} comparisons")
        return {'current_step': 'assemble', 'status': STATUS_COMPLETED, 'report': report}

    # ------------------------------------------------------------------

    def run(self) -> Dict[str, Any]:
        """
        Run every step and return the assembled report

        Raises:
            DomainError: bad configuration or geometry
            UnresolvedVerdictError: an Unknown verdict blocked a step
        """
        initial_state = create_initial_state(self.config)
        config = {"recursion_limit": RECURSION_LIMIT}
        result = self.graph.invoke(initial_state, config)
        if result.get('has_errors'):
            if self._failure is not None:
                raise self._failure
            raise DomainError("; ".join(result.get('errors', [])))
        return result['report']


def run_convergence_experiment(config: ExperimentConfig) -> Dict[str, Any]:
    return ConvergenceExperiment(config).run()
