import math

import pytest

from chains.chain import (
    Chain,
    Homotopy,
    Move,
    chain_from_json,
    chain_to_json,
    concat,
    deviation,
    gap_excess,
    geodesic_chain,
    length,
    midpoint_refinement,
    normalize_count,
    refine_to_scale,
    refined_polygon,
    reverse,
    snap_homotopy,
)
from config.enums import MoveKind
from config.errors import DomainError, SnapError


def around(circle, step, scale):
    """Once-around loop on the unit circle with the given step"""
    k = int(round(1.0 / step))
    return Chain.from_pairs(circle, [(0, j * step) for j in range(k)] + [(0, 0.0)], scale)


# ----------------------------------------------------------------------
# Chain basics
# ----------------------------------------------------------------------

def test_chain_rejects_long_gap(circle):
    with pytest.raises(DomainError):
        Chain.from_pairs(circle, [(0, 0.0), (0, 0.3)], 0.3)
    with pytest.raises(DomainError):
        Chain((), 0.3, circle)
    with pytest.raises(DomainError):
        Chain.from_pairs(circle, [(0, 0.0)], 0.0)


def test_loop_and_length(circle):
    c = around(circle, 0.1, 0.2)
    assert c.is_loop
    assert c.segments == 10
    assert length(c) == pytest.approx(1.0)
    assert gap_excess(c) == pytest.approx(0.1)


def test_concat_and_reverse(circle):
    a = Chain.from_pairs(circle, [(0, 0.0), (0, 0.1)], 0.2)
    b = Chain.from_pairs(circle, [(0, 0.1), (0, 0.25)], 0.2)
    ab = concat(a, b)
    assert len(ab) == 3
    assert reverse(ab).first == ab.last
    with pytest.raises(DomainError):
        concat(b, a)
    with pytest.raises(DomainError):
        concat(a, b.at_scale(0.3))


def test_deviation_needs_equal_counts(circle):
    a = Chain.from_pairs(circle, [(0, 0.0), (0, 0.1)], 0.2)
    b = Chain.from_pairs(circle, [(0, 0.05), (0, 0.1)], 0.2)
    assert deviation(a, b) == pytest.approx(0.05)
    with pytest.raises(DomainError):
        deviation(a, concat(a, Chain.from_pairs(circle, [(0, 0.1), (0, 0.2)], 0.2)))


def test_json_round_trip(circle):
    c = around(circle, 0.125, 0.2)
    assert chain_from_json(chain_to_json(c), circle) == c
    with pytest.raises(DomainError):
        chain_from_json({'points': [[0, 0.0]]}, circle)


# ----------------------------------------------------------------------
# Moves and homotopies
# ----------------------------------------------------------------------

def test_replay_validates_each_move(circle):
    c = Chain.from_pairs(circle, [(0, 0.0), (0, 0.1), (0, 0.2)], 0.25)
    good = Homotopy(c, (Move(MoveKind.REMOVE, 1, circle.point(0, 0.1)),))
    assert good.end.points == (circle.point(0, 0.0), circle.point(0, 0.2))

    far = Homotopy(c, (Move(MoveKind.INSERT, 1, circle.point(0, 0.6)),))
    with pytest.raises(DomainError, match="move 0"):
        far.replay()

    endpoint = Homotopy(c, (Move(MoveKind.REMOVE, 0, circle.point(0, 0.0)),))
    with pytest.raises(DomainError):
        endpoint.replay()


def test_endpoint_duplicates_are_legal(circle):
    c = Chain.from_pairs(circle, [(0, 0.0), (0, 0.1)], 0.25)
    h = Homotopy(c, (Move(MoveKind.INSERT, 2, c.last),
                     Move(MoveKind.REMOVE, 2, c.last)))
    assert h.end == c
    assert Homotopy(c).then(h.moves).end == c


# ----------------------------------------------------------------------
# Refinements
# ----------------------------------------------------------------------

def test_midpoint_refinement_keeps_length(circle):
    c = around(circle, 0.25, 0.3)
    refined = midpoint_refinement(c)
    assert refined.segments == 2 * c.segments
    assert length(refined) == pytest.approx(length(c))
    assert refined.provenance.end == refined


def test_refine_to_scale(circle):
    c = around(circle, 0.25, 0.3)
    refined = refine_to_scale(c, 0.1)
    assert refined.scale == 0.1
    assert max(refined.gaps) < 0.1
    assert length(refined) == pytest.approx(1.0)
    assert refined.provenance.end.points == refined.points
    with pytest.raises(DomainError):
        refine_to_scale(c, 0.5)


def test_geodesic_chain(wedge):
    p, q = wedge.point(0, 0.2), wedge.point(1, 1.0)
    c = geodesic_chain(wedge, p, q, 0.15)
    assert c.first == p and c.last == q
    assert length(c) == pytest.approx(wedge.distance(p, q))
    assert max(c.gaps) < 0.15


def test_refined_polygon_on_torus(square_torus):
    corners = [square_torus.vertex_point(v) for v in (0, 4, 4 * 12 + 4, 4 * 12)]
    c = refined_polygon(square_torus, corners, 0.2)
    assert c.is_loop
    assert len(c) == 9
    assert length(c) == pytest.approx(4 * 4 / 12)


# ----------------------------------------------------------------------
# Normalization
# ----------------------------------------------------------------------

@pytest.mark.parametrize("step, scale", [(0.1, 0.2), (0.05, 0.2), (0.25, 0.3)])
def test_normalize_count_hits_target(circle, step, scale):
    c = around(circle, step, scale)
    bound = 1.0
    normalized = normalize_count(c, bound)
    assert normalized.segments == math.floor(2 * bound / scale + 1)
    assert length(normalized) <= length(c) + 1e-9
    assert normalized.first == c.first and normalized.last == c.last
    assert normalized.provenance.end == normalized


def test_normalize_count_rejects_long_chain(circle):
    with pytest.raises(DomainError):
        normalize_count(around(circle, 0.1, 0.2), 0.5)


# ----------------------------------------------------------------------
# Snapping
# ----------------------------------------------------------------------

def test_snap_homotopy_reaches_targets(circle, circle_net):
    c = Chain.from_pairs(circle, [(0, 0.0), (0, 0.101), (0, 0.199), (0, 0.3)], 0.2)
    targets = [circle_net.points[circle_net.snap(p)[0]] for p in c.points]
    h = snap_homotopy(c, targets)
    assert h.end.points == tuple(targets)


def test_snap_refuses_large_moves(circle):
    c = Chain.from_pairs(circle, [(0, 0.0), (0, 0.15), (0, 0.3)], 0.2)
    targets = [circle.point(0, 0.0), circle.point(0, 0.2), circle.point(0, 0.3)]
    with pytest.raises(SnapError):
        snap_homotopy(c, targets)


# ----------------------------------------------------------------------
# Randomized chains
# ----------------------------------------------------------------------

def random_walk(circle, rng, scale, steps):
    offsets = [float(rng.uniform(0.0, 1.0))]
    for _ in range(steps):
        offsets.append(offsets[-1] + float(rng.uniform(-0.9, 0.9)) * scale)
    return Chain.from_pairs(circle, [(0, x % 1.0) for x in offsets], scale)


def test_normalize_count_on_random_chains(circle, rng):
    for _ in range(100):
        scale = float(rng.uniform(0.05, 0.3))
        c = random_walk(circle, rng, scale, int(rng.integers(1, 30)))
        bound = length(c) + float(rng.uniform(0.0, scale))
        normalized = normalize_count(c, bound)
        assert normalized.segments == math.floor(2 * bound / scale + 1)
        assert length(normalized) <= length(c) + 1e-9
        assert normalized.first == c.first and normalized.last == c.last
        assert normalized.provenance.end == normalized


def test_close_chains_are_homotopic(circle, rng):
    for _ in range(100):
        scale = float(rng.uniform(0.05, 0.3))
        a = random_walk(circle, rng, scale, int(rng.integers(2, 20)))
        slack = 0.95 * gap_excess(a) / 2.0
        moved = [a.points[0]]
        for p in a.points[1:-1]:
            moved.append(circle.point(0, (p.offset + float(rng.uniform(-slack, slack))) % 1.0))
        moved.append(a.points[-1])
        b = Chain(tuple(moved), scale, circle)
        assert deviation(a, b) < gap_excess(a) / 2.0
        assert snap_homotopy(a, b.points).end == b
