import math

import numpy as np
import pytest

from config.errors import DomainError
from geometry.metric_graph import (
    MetricGraph,
    build_net,
    make_circle,
    make_hawaiian_stage,
    make_segment,
    make_star,
    make_torus_grid,
    make_wedge,
    scaled,
)


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------

def test_rejects_nonpositive_length():
    with pytest.raises(DomainError):
        MetricGraph([0, 1], [(0, 0, 1, 0.0)])


def test_rejects_disconnected():
    with pytest.raises(DomainError):
        MetricGraph([0, 1, 2, 3], [(0, 0, 1, 1.0), (1, 2, 3, 1.0)])


def test_rejects_unknown_vertex():
    with pytest.raises(DomainError):
        MetricGraph([0], [(0, 0, 1, 1.0)])


def test_point_outside_edge_is_rejected(circle):
    with pytest.raises(DomainError):
        circle.point(0, 1.5)
    with pytest.raises(DomainError):
        circle.point(7, 0.1)


def test_wedge_point_has_valency_twice_the_loops():
    assert make_wedge([1.0, 2.0, 3.0]).degree(0) == 6
    assert make_hawaiian_stage(4).degree(0) == 8


def test_scaled_keeps_combinatorics(wedge):
    bigger = scaled(wedge, 2.0)
    assert bigger.same_combinatorics(wedge)
    assert bigger.total_length == pytest.approx(2 * wedge.total_length)
    assert not make_circle(1.0).same_combinatorics(wedge)


# ----------------------------------------------------------------------
# Distances
# ----------------------------------------------------------------------

def test_circle_distance_wraps(circle):
    p, q = circle.point(0, 0.1), circle.point(0, 0.9)
    assert circle.distance(p, q) == pytest.approx(0.2)
    assert circle.distance(q, p) == pytest.approx(0.2)


def test_circle_diameter(circle):
    assert circle.diameter == pytest.approx(0.5, abs=2 * 1.0 / 512)


def test_segment_distance_is_offset_difference():
    g = make_segment(2.0)
    assert g.distance(g.point(0, 0.25), g.point(0, 1.75)) == pytest.approx(1.5)


def test_star_distance_passes_through_centre():
    g = make_star([1.0, 2.0])
    # leaf 1 sits at offset 1.0 of edge 0, leaf 2 at offset 2.0 of edge 1
    assert g.distance(g.point(0, 0.5), g.point(1, 1.5)) == pytest.approx(2.0)


def test_torus_distance_is_l1_on_the_grid():
    g = make_torus_grid(1.0 / 3.0, 2.0 / 3.0, 12)
    # horizontal step 1/12, vertical step 1/6
    a = g.vertex_point(0)
    b = g.vertex_point(2 * 12 + 3)
    assert g.distance(a, b) == pytest.approx(3 / 12 + 2 / 6)


def test_pairwise_matches_single_distances(wedge, rng):
    points = [wedge.point(int(e), float(o))
              for e, o in zip(rng.integers(0, 2, 12), rng.uniform(0, 1, 12))]
    matrix = wedge.pairwise_distances(points)
    for i in range(len(points)):
        for j in range(len(points)):
            assert matrix[i, j] == pytest.approx(wedge.distance(points[i], points[j]))
    assert np.allclose(matrix, matrix.T)


def test_triangle_inequality_on_random_points(wedge, rng):
    points = [wedge.point(int(e), float(o))
              for e, o in zip(rng.integers(0, 2, 20), rng.uniform(0, 1, 20))]
    d = wedge.pairwise_distances(points)
    n = len(points)
    for i in range(n):
        for j in range(n):
            assert np.all(d[i, j] <= d[i, :] + d[:, j] + 1e-9)


# ----------------------------------------------------------------------
# Geodesics
# ----------------------------------------------------------------------

def test_midpoint_is_equidistant(circle):
    p, q = circle.point(0, 0.9), circle.point(0, 0.2)
    m = circle.midpoint(p, q)
    assert circle.distance(p, m) == pytest.approx(0.15)
    assert circle.distance(m, q) == pytest.approx(0.15)
    assert m == circle.point(0, 0.05)


def test_geodesic_point_along_star():
    g = make_star([1.0, 1.0])
    p, q = g.point(0, 1.0), g.point(1, 1.0)
    x = g.geodesic_point(p, q, 1.5)
    assert g.distance(p, x) == pytest.approx(1.5)
    assert g.distance(x, q) == pytest.approx(0.5)


# ----------------------------------------------------------------------
# Nets
# ----------------------------------------------------------------------

def test_net_resolution_and_size(circle):
    net = build_net(circle, 0.02)
    assert len(net) == 50
    assert net.resolution == pytest.approx(0.01)


def test_net_covers_the_graph(wedge, rng):
    net = build_net(wedge, 0.1)
    for e, o in zip(rng.integers(0, 2, 30), rng.uniform(0, 1, 30)):
        _, moved = net.snap(wedge.point(int(e), float(o)))
        assert moved <= net.resolution + 1e-9


def test_net_with_fixed_segments_corresponds(circle):
    net = build_net(circle, 0.02)
    other = build_net(make_circle(0.5), 0.02, segments=net.segments)
    assert len(other) == len(net)
    assert other.resolution == pytest.approx(net.resolution / 2)


def test_snap_ties_go_to_lower_index(circle):
    net = build_net(circle, 0.5)
    i, moved = net.snap(circle.point(0, 0.25))
    assert moved == pytest.approx(0.25)
    assert i == 0


def test_non_net_point_has_no_index(circle_net, circle):
    with pytest.raises(DomainError):
        circle_net.index_of(circle.point(0, 0.015))


def test_bad_resolution():
    with pytest.raises(DomainError):
        build_net(make_circle(1.0), 0.0)
    with pytest.raises(DomainError):
        make_circle(-1.0)
    with pytest.raises(DomainError):
        make_torus_grid(1.0, 1.0, 2)
    assert math.isfinite(make_hawaiian_stage(3).total_length)
