"""
Command-Line Interface
Subcommands spectrum, cover, generators, gh and demo; JSON/CSV to the output
directory, tables to standard output
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config.constants import EMOJI_WARNING, EXIT_DOMAIN_ERROR, EXIT_OK, EXIT_UNRESOLVED, FORMAT_VERSION
from config.enums import GroupKind, Subcommand
from config.errors import DomainError, UnresolvedVerdictError
from config.run_config import ExperimentConfig, GraphSpec, RunConfig, env_max_states, env_workers, parse_number
from convergence.experiment import run_convergence_experiment
from convergence.hawaiian import hawaiian_valency_demo
from covers.cover_ball import cover_ball, quotient_group_invariants
from covers.kernel import KernelSpec
from covers.lollichains import lollichain_generators
from engine.homotopy import HomotopyEngine
from geometry.graph_io import graph_from_spec, graph_to_text, load_graph
from geometry.metric_graph import MetricGraph, build_net
from reports.models import (
    CoverBallModel,
    DemoReportModel,
    ExperimentReportModel,
    GeneratorReportModel,
    SpectrumReportModel,
    validate_report,
)
from reports.writer import (
    SPECTRUM_COLUMNS,
    demo_table,
    experiment_table,
    spectrum_table,
    write_csv,
    write_json,
    write_text,
)
from spectrum.critical import covering_spectrum, critical_spectrum

logger = logging.getLogger(__name__)


def _number(text: str) -> float:
    try:
        return parse_number(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='homotopy', description="Discrete homotopy of metric graphs")
    subparsers = parser.add_subparsers(dest='subcommand', required=True)

    def graph_options(p: argparse.ArgumentParser) -> None:
        p.add_argument('--gen', dest='graph', help="named generator, e.g. circle:1 or torus:1/3,1/3,12")
        p.add_argument('--graph', dest='graph_file', help="graph text file")
        p.add_argument('--res', dest='resolution', type=_number, default=0.02, help="net step")

    def common_options(p: argparse.ArgumentParser) -> None:
        p.add_argument('--out', dest='output_dir', default='output')
        p.add_argument('--max-states', type=int, default=env_max_states())
        p.add_argument('--workers', type=int, default=env_workers())

    p = subparsers.add_parser(Subcommand.SPECTRUM.value, help="homotopy critical spectrum")
    graph_options(p)
    p.add_argument('--eta', type=_number)
    p.add_argument('--eps-min', type=_number)
    p.add_argument('--eps-max', type=_number)
    common_options(p)

    p = subparsers.add_parser(Subcommand.COVER.value, help="ball in an eps-cover or circle cover")
    graph_options(p)
    p.add_argument('--eps', type=_number)
    p.add_argument('--radius', type=_number)
    p.add_argument('--triads', dest='triads_file', help="kernel triads JSON")
    common_options(p)

    p = subparsers.add_parser(Subcommand.GENERATORS.value, help="lollichain generators")
    graph_options(p)
    p.add_argument('--eps', type=_number)
    common_options(p)

    p = subparsers.add_parser(Subcommand.GH.value, help="Gromov-Hausdorff convergence experiment")
    p.add_argument('--config', dest='config_file')
    common_options(p)

    p = subparsers.add_parser(Subcommand.DEMO.value, help="Hawaiian stage valency demo")
    p.add_argument('--stages', type=int, default=4)
    p.add_argument('--floor', type=_number, default=0.1)
    p.add_argument('--res', dest='resolution', type=_number, default=0.02)
    common_options(p)
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse and validate; argparse exits with status 2 on malformed flags"""
    args = vars(build_parser().parse_args(argv))
    args['subcommand'] = Subcommand(args['subcommand'])
    fields = RunConfig.__dataclass_fields__
    config = RunConfig(**{k: v for k, v in args.items() if k in fields})
    if config.subcommand == Subcommand.DEMO:
        config.graph = config.graph or f"hawaiian:{config.stages}"
    config.validate()
    return config


def _load_graph(config: RunConfig) -> Tuple[MetricGraph, str]:
    if config.graph_file:
        return load_graph(config.graph_file), config.graph_file
    return graph_from_spec(GraphSpec.from_string(config.graph)), config.graph


def _engine(config: RunConfig, graph: MetricGraph) -> HomotopyEngine:
    return HomotopyEngine(build_net(graph, config.resolution), max_states=config.max_states)


def _out(config: RunConfig, name: str) -> str:
    return os.path.join(config.output_dir, name)


# ----------------------------------------------------------------------
# Subcommands; each returns whether the result is fully certified
# ----------------------------------------------------------------------

def run_spectrum(config: RunConfig) -> bool:
    graph, label = _load_graph(config)
    report = critical_spectrum(_engine(config, graph), config.eps_min, config.eps_max, config.eta,
                               workers=config.workers)
    data: Dict[str, Any] = {
        'format_version': FORMAT_VERSION,
        'graph': label,
        **report.to_dict(),
        'covering_spectrum': [[value, multiplicity] for value, multiplicity in covering_spectrum(report)],
        'certain': report.is_certain,
    }
    model = validate_report(SpectrumReportModel, data)
    write_json(_out(config, 'spectrum.json'), model)
    rows = sorted((e.model_dump() for e in model.entries), key=lambda e: (e['value'], e['multiplicity']))
    write_csv(_out(config, 'spectrum.csv'), rows, SPECTRUM_COLUMNS)
    print(spectrum_table(data))
    return report.is_certain


def run_cover(config: RunConfig) -> bool:
    graph, label = _load_graph(config)
    engine = _engine(config, graph)
    kernel = KernelSpec()
    if config.triads_file:
        with open(config.triads_file, 'r', encoding='utf-8') as f:
            kernel = KernelSpec.from_dict(json.load(f), graph)
    ball = cover_ball(engine, config.eps, config.radius, kernel)
    rank, torsion = quotient_group_invariants(ball)
    data = {
        **ball.projection_table(),
        'graph': label,
        'resolution': engine.net.resolution,
        'kernel_triads': [t.to_dict() for t in kernel.triads],
        'deck_rank': rank,
        'deck_torsion': list(torsion),
        'group_kind': ball.quotient.kind.value,
    }
    write_text(_out(config, 'cover_ball.graph'), graph_to_text(ball.to_metric_graph()))
    write_json(_out(config, 'cover_projection.json'), validate_report(CoverBallModel, data))
    print(f"cover ball: {len(ball.ball)} nodes within radius {config.radius:g}, "
          f"deck group rank {rank} torsion {list(torsion)}")
    # deck invariants of an unrecognised group are only its abelianization
    if ball.quotient.kind == GroupKind.UNKNOWN:
        logger.warning(f"{EMOJI_WARNING} quotient group not recognised; deck invariants are abelianized only")
        return False
    return True


def run_generators(config: RunConfig) -> bool:
    graph, label = _load_graph(config)
    report = lollichain_generators(_engine(config, graph), config.eps)
    data = {'format_version': FORMAT_VERSION, 'graph': label, **report.to_dict()}
    write_json(_out(config, 'generators.json'), validate_report(GeneratorReportModel, data))
    print(f"{len(report)} lollichain generators at scale {config.eps:g} "
          f"({'certified' if report.generation_certified else 'not certified'})")
    return report.generation_certified


def run_gh(config: RunConfig) -> bool:
    experiment = ExperimentConfig.from_json_file(config.config_file)
    report = run_convergence_experiment(experiment)
    model = validate_report(ExperimentReportModel, report)
    write_json(_out(config, 'experiment.json'), model)
    write_csv(_out(config, 'experiment.csv'), report['rows'])
    print(experiment_table(report['rows']))
    for name, first in report['thresholds'].items():
        print(f"{name}: {'holds from i = ' + str(first) if first is not None else 'does not settle'}")
    unsettled = [name for name, first in report['thresholds'].items() if first is None]
    failed_checks = [leg['index'] for leg in report['legs'] if leg.get('p_check') and not leg['p_check']['holds']]
    if unsettled or failed_checks:
        logger.warning(f"{EMOJI_WARNING} unsettled thresholds {unsettled}, failed p-isometry checks at {failed_checks}")
        return False
    return True


def run_demo(config: RunConfig) -> bool:
    stages = hawaiian_valency_demo(config.stages, config.floor, config.resolution,
                                   max_states=config.max_states, workers=config.workers)
    data = {'format_version': FORMAT_VERSION, 'resolution': config.resolution,
            'floor': config.floor, 'stages': stages}
    write_json(_out(config, 'demo.json'), validate_report(DemoReportModel, data))
    print(demo_table(stages))
    return all(s['certain'] for s in stages)


COMMANDS = {
    Subcommand.SPECTRUM: run_spectrum,
    Subcommand.COVER: run_cover,
    Subcommand.GENERATORS: run_generators,
    Subcommand.GH: run_gh,
    Subcommand.DEMO: run_demo,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    0 on success, 1 on domain errors, 2 when an Unknown or heuristic verdict
    marks the result or an experiment inequality never settles
    """
    try:
        config = parse_config(argv)
        certified = COMMANDS[config.subcommand](config)
    except UnresolvedVerdictError as e:
        logger.error(f"Unresolved verdict: {e.diagnostic}")
        print(f"unresolved: {e.diagnostic}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except DomainError as e:
        logger.error(f"Domain error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    except OSError as e:
        logger.error(f"I/O error: {e}", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR
    if not certified:
        logger.warning(f"{EMOJI_WARNING} result carries heuristic or unknown verdicts")
        return EXIT_UNRESOLVED
    return EXIT_OK
