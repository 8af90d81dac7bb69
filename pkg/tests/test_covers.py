import json

import numpy as np
import pytest

from chains.chain import Chain, reverse
from config.enums import GroupKind
from config.errors import DomainError
from convergence.gh import gh_bounds
from covers.cover_ball import cover_ball, deck_action, quotient_group_invariants
from covers.kernel import KernelSpec, lollichain
from covers.lollichains import classes_generate, lollichain_generators
from covers.theta_kernel import theta_kernel_check
from geometry.graph_io import graph_to_text, parse_graph_text


@pytest.fixture(scope="module")
def wrapping_kernel(circle):
    points = [circle.point(0, 0.0), circle.point(0, 0.34), circle.point(0, 0.66)]
    return KernelSpec.from_points(circle, [points], eta=0.02)


@pytest.fixture(scope="module")
def line_ball(circle_engine):
    # below the critical value the cover unwraps the circle
    return cover_ball(circle_engine, 0.3, 2.4)


def once_around(circle, scale):
    start = circle.point(0, 0.0)
    return Chain((start,) + tuple(circle.point(0, j / 10) for j in range(1, 10)) + (start,), scale, circle)


# ----------------------------------------------------------------------
# Kernel specifications
# ----------------------------------------------------------------------

def test_kernel_round_trip(circle, wrapping_kernel):
    again = KernelSpec.from_dict(json.loads(json.dumps(wrapping_kernel.to_dict())), circle)
    assert len(again) == 1
    assert again.triads[0].point_set == wrapping_kernel.triads[0].point_set


def test_malformed_kernel_file(circle):
    with pytest.raises(DomainError):
        KernelSpec.from_dict({'triads': [{'eta': 0.1}]}, circle)
    with pytest.raises(DomainError):
        KernelSpec.from_dict({'triads': [{'points': [[0, 0.0], [0, 0.1], [0, 0.5]]}]}, circle)


def test_lollichain_is_a_based_loop(wedge):
    points = [wedge.point(1, 0.6), wedge.point(1, 1.25), wedge.point(1, 1.9)]
    kernel = KernelSpec.from_points(wedge, [points], eta=0.05)
    chain = lollichain(wedge, wedge.vertex_point(0), kernel.triads[0], 0.25)
    assert chain.is_loop
    assert chain.first == wedge.vertex_point(0)
    assert chain.scale == 0.25


# ----------------------------------------------------------------------
# Cover balls
# ----------------------------------------------------------------------

def test_eps_cover_of_circle_is_a_segment(line_ball):
    assert 239 <= len(line_ball.ball) <= 241
    distances = line_ball.distance_matrix()
    assert distances.max() == pytest.approx(4.8, abs=0.05)
    assert quotient_group_invariants(line_ball) == (1, [])
    assert line_ball.quotient.kind in (GroupKind.FREE, GroupKind.ABELIAN)


def test_eps_cover_above_critical_value_is_the_circle(circle_engine):
    ball = cover_ball(circle_engine, 0.4, 2.4)
    assert len(ball.ball) == 50
    assert ball.distance_matrix().max() == pytest.approx(0.5, abs=0.02)
    assert quotient_group_invariants(ball) == (0, [])


def test_circle_cover_with_wrapping_kernel_folds_back(circle_engine, wrapping_kernel):
    ball = cover_ball(circle_engine, 0.3, 2.4, wrapping_kernel)
    assert len(ball.ball) == 50
    assert quotient_group_invariants(ball) == (0, [])


def test_projection_and_locate(line_ball):
    for node in line_ball.ball[:: 40]:
        chain = line_ball.representative(node)
        assert chain.last == line_ball.projection(node)
        assert line_ball.locate(chain) == node
        assert line_ball.distance(0, node) == pytest.approx(line_ball.norms[node])


def test_deck_action_translates_by_the_circumference(line_ball, circle):
    action = deck_action(line_ball, once_around(circle, 0.3))
    assert action
    assert line_ball.norms[action[0]] == pytest.approx(1.0, abs=0.02)
    for node, image in action.items():
        assert image != node
        assert line_ball.projection(image) == line_ball.projection(node)


def test_deck_action_needs_based_loop(line_ball, circle):
    open_chain = Chain((circle.point(0, 0.0), circle.point(0, 0.1)), 0.3, circle)
    with pytest.raises(DomainError):
        deck_action(line_ball, open_chain)


def test_ball_exports_as_graph(line_ball):
    text = graph_to_text(line_ball.to_metric_graph())
    assert len(parse_graph_text(text).vertices) == len(line_ball.ball)
    table = line_ball.projection_table()
    assert table['nodes'][0]['norm'] == 0.0
    assert len(table['nodes']) == len(line_ball.ball)


def test_cover_ball_validation(circle_engine):
    with pytest.raises(DomainError):
        cover_ball(circle_engine, 0.3, 0.0)
    with pytest.raises(DomainError):
        cover_ball(circle_engine, 0.015, 1.0)


# ----------------------------------------------------------------------
# Kernel of the scale change
# ----------------------------------------------------------------------

def test_theta_kernel_is_generated_by_the_wrapping_triad(circle_engine, wrapping_kernel):
    report = theta_kernel_check(circle_engine, 0.3, 0.4, wrapping_kernel)
    assert report.rank_eps == 1 and report.rank_delta == 0
    assert report.equal
    assert not theta_kernel_check(circle_engine, 0.3, 0.4, KernelSpec()).equal
    with pytest.raises(DomainError):
        theta_kernel_check(circle_engine, 0.4, 0.3, wrapping_kernel)


# ----------------------------------------------------------------------
# Lollichain generators
# ----------------------------------------------------------------------

def test_wedge_needs_two_generators(wedge_engine):
    report = lollichain_generators(wedge_engine, 0.25)
    assert len(report) == 2
    assert report.h1_generates
    assert report.generation_certified
    assert all(c.first == wedge_engine.basepoint for c in report.generators)


def test_circle_needs_one_generator(circle_engine):
    report = lollichain_generators(circle_engine, 0.25)
    assert len(report) == 1
    assert report.to_dict()['h1_generates'] is True


def test_tree_needs_none(star_engine):
    report = lollichain_generators(star_engine, 0.2)
    assert len(report) == 0
    assert report.generation_certified


def test_classes_generate(circle_engine, circle):
    group = circle_engine.group(0.2)
    once = circle_engine.h1_class(once_around(circle, 0.2))
    assert classes_generate([once], list(group.abelian.moduli))
    assert not classes_generate([once + once], list(group.abelian.moduli))
    assert classes_generate([], [])


# ----------------------------------------------------------------------
# Cover geometry
# ----------------------------------------------------------------------

def test_line_ball_is_close_to_a_segment(line_ball):
    nodes = line_ball.ball
    dx = line_ball.distance_matrix(nodes)
    base = nodes.index(line_ball.basepoint_node)
    end = int(np.argmax(dx[base]))
    # signed position along the unwrapped circle
    position = dx[end] - dx[end, base]
    segment = np.arange(-120, 121) * 0.02
    dy = np.abs(segment[:, None] - segment[None, :])
    correspondence = {k: int(np.argmin(np.abs(segment - x))) for k, x in enumerate(position)}
    _, upper = gh_bounds(dx, dy, correspondence)
    assert upper <= 2 * line_ball.net.resolution + 1e-9


def test_projection_is_isometric_on_small_balls(line_ball, circle):
    half = line_ball.eps / 2.0
    for node in line_ball.ball[::30]:
        row = line_ball.distances_from(node)
        for other in line_ball.ball:
            if row[other] < half - 1e-9:
                assert row[other] == pytest.approx(
                    circle.distance(line_ball.projection(node), line_ball.projection(other)), abs=1e-9)


def test_deck_group_acts_transitively_on_the_base_fiber(line_ball, circle):
    base = line_ball.basepoint_node
    fiber = {n for n in line_ball.ball if line_ball.projection(n) == line_ball.projection(base)}
    assert len(fiber) == 5
    reached = {base}
    for loop in (once_around(circle, 0.3), reverse(once_around(circle, 0.3))):
        action = deck_action(line_ball, loop)
        node = base
        while node in action:
            node = action[node]
            reached.add(node)
    assert reached == fiber


def test_folding_below_a_scale_matches_the_larger_scale(wedge_engine, wedge):
    # folding the short loop's triad at 0.3 gives the 0.4 cover, where that loop is already null
    triad = [wedge.point(0, 0.0), wedge.point(0, 1.0 / 3.0), wedge.point(0, 2.0 / 3.0)]
    folded = cover_ball(wedge_engine, 0.3, 1.0, KernelSpec.from_points(wedge, [triad], eta=0.05))
    wider = cover_ball(wedge_engine, 0.4, 1.0)
    assert quotient_group_invariants(folded) == quotient_group_invariants(wider) == (1, [])

    position = {node: k for k, node in enumerate(wider.ball)}
    correspondence = {}
    for k, node in enumerate(folded.ball):
        image = wider.locate(folded.representative(node))
        if image in position:
            correspondence[k] = position[image]
    _, upper = gh_bounds(folded.distance_matrix(), wider.distance_matrix(), correspondence)
    assert upper <= 2 * wedge_engine.net.resolution + 1e-9


def test_torus_deck_invariants(square_torus_engine, square_torus):
    assert quotient_group_invariants(cover_ball(square_torus_engine, 0.32, 0.3)) == (2, [])
    horizontal = [square_torus.vertex_point(v) for v in (0, 4, 8)]
    kernel = KernelSpec.from_points(square_torus, [horizontal], eta=1.0 / 24.0)
    ball = cover_ball(square_torus_engine, 0.32, 0.3, kernel)
    assert quotient_group_invariants(ball) == (1, [])
