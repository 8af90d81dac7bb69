import pytest

from config.enums import Certainty, Equivalence
from config.errors import DomainError
from geometry.metric_graph import build_net, make_circle, make_torus_grid, scaled
from engine.homotopy import HomotopyEngine
from spectrum.critical import covering_spectrum, critical_spectrum
from spectrum.triads import (
    classify_triad,
    equivalent_triads,
    near_equilateral,
    triad_from_points,
    triads_at,
)


def circle_triad(circle, a, b, c, eta=0.02):
    return triad_from_points(circle, [circle.point(0, a), circle.point(0, b), circle.point(0, c)], eta)


# ----------------------------------------------------------------------
# Triads
# ----------------------------------------------------------------------

def test_triad_from_points(circle):
    t = circle_triad(circle, 0.0, 0.34, 0.66)
    assert t.side == pytest.approx(0.34)
    with pytest.raises(DomainError):
        circle_triad(circle, 0.0, 0.1, 0.5, eta=0.01)
    with pytest.raises(DomainError):
        triad_from_points(circle, [circle.point(0, 0.0)] * 2)


def test_triad_symmetries(circle):
    t = circle_triad(circle, 0.0, 0.34, 0.66)
    assert t.rotated(1).points == (t.points[1], t.points[2], t.points[0])
    assert t.reflected().point_set == t.point_set
    assert t.loop(circle).is_loop


def test_triads_at_respects_the_band(circle_net):
    for t in triads_at(circle_net, 1.0 / 3.0, 0.02):
        d = circle_net.distance_matrix
        i, j, k = t.indices
        for a, b in ((i, j), (j, k), (i, k)):
            assert abs(d[a, b] - 1.0 / 3.0) <= 0.02 + 1e-9


def test_near_equilateral_spread(circle_net):
    triads = near_equilateral(circle_net, 0.3, 0.36, 0.01)
    assert triads
    d = circle_net.distance_matrix
    for t in triads:
        sides = [d[t.indices[0], t.indices[1]], d[t.indices[1], t.indices[2]], d[t.indices[0], t.indices[2]]]
        assert max(sides) - min(sides) <= 0.02 + 1e-9
        assert 0.3 - 1e-9 <= t.side <= 0.36 + 1e-9


def test_wrapping_triad_is_essential(circle_engine, circle):
    verdict = classify_triad(circle_engine, circle_triad(circle, 0.0, 0.34, 0.66))
    assert verdict.essential is True
    assert verdict.certain


def test_small_triad_is_inessential(circle_engine, circle):
    verdict = classify_triad(circle_engine, circle_triad(circle, 0.0, 0.1, 0.2, eta=0.05))
    assert verdict.essential is False


def test_triad_a_few_net_steps_wide_is_classified(circle_engine, circle):
    # the triad loop is refined until snapping onto the net is sound
    verdict = classify_triad(circle_engine, circle_triad(circle, 0.0, 0.02, 0.04, eta=0.01))
    assert verdict.essential is False
    assert verdict.certain


def test_rotated_triads_are_equivalent(circle_engine, circle):
    t1 = circle_triad(circle, 0.0, 0.34, 0.66)
    t2 = circle_triad(circle, 0.1, 0.44, 0.76)
    assert equivalent_triads(circle_engine, t1, t2) == Equivalence.EQUIVALENT


def test_horizontal_and_vertical_triads_are_distinct(square_torus_engine, square_torus):
    def vertex(i, j):
        return square_torus.vertex_point(12 * i + j)

    horizontal = triad_from_points(square_torus, [vertex(0, 0), vertex(0, 4), vertex(0, 8)])
    vertical = triad_from_points(square_torus, [vertex(0, 0), vertex(4, 0), vertex(8, 0)])
    assert equivalent_triads(square_torus_engine, horizontal, vertical) == Equivalence.DISTINCT


# ----------------------------------------------------------------------
# Critical spectrum
# ----------------------------------------------------------------------

def test_circle_spectrum(circle_engine):
    report = critical_spectrum(circle_engine, eps_min=0.05, eps_max=0.45, eta=0.04, workers=2)
    assert len(report.entries) == 1
    entry = report.entries[0]
    assert entry.value == pytest.approx(1.0 / 3.0, abs=entry.error)
    assert entry.multiplicity == 1
    assert entry.certainty == Certainty.CERTAIN
    assert report.is_certain
    assert covering_spectrum(report) == [(pytest.approx(1.5 * entry.value), 1)]


def test_circle_spectrum_over_the_default_range(circle_engine):
    # eps_min 3 * resolution, eta 2 * resolution, eps_max the diameter
    report = critical_spectrum(circle_engine, workers=2)
    assert report.eps_min == pytest.approx(0.03)
    assert report.eta == pytest.approx(0.02)
    assert len(report.entries) == 1
    assert report.values[0] == pytest.approx(1.0 / 3.0, abs=0.06)
    assert report.entries[0].multiplicity == 1
    assert report.is_certain


def test_circle_spectrum_over_the_default_range_with_wide_eta(circle_engine):
    report = critical_spectrum(circle_engine, eta=0.04, workers=1)
    assert len(report.entries) == 1
    assert report.values[0] == pytest.approx(1.0 / 3.0, abs=0.08)
    assert report.is_certain


def test_tree_has_empty_spectrum(star_engine):
    report = critical_spectrum(star_engine, eps_min=0.15, eta=0.05, workers=2)
    assert report.entries == []
    assert report.is_certain


def test_wedge_spectrum(wedge_engine):
    report = critical_spectrum(wedge_engine, eps_min=0.2, eps_max=0.8, eta=0.05, workers=2)
    assert [e.multiplicity for e in report.entries] == [1, 1]
    assert report.values[0] == pytest.approx(2.0 / 3.0, abs=0.1)
    assert report.values[1] == pytest.approx(1.0 / 3.0, abs=0.1)


def test_square_torus_has_multiplicity_two(square_torus_engine):
    report = critical_spectrum(square_torus_engine, eps_min=0.25, eps_max=0.4, eta=1.0 / 24.0, workers=2)
    assert len(report.entries) == 1
    assert report.entries[0].value == pytest.approx(1.0 / 3.0, abs=1.0 / 12.0)
    assert report.entries[0].multiplicity == 2


@pytest.mark.slow
def test_rectangle_torus_has_two_simple_values():
    g = make_torus_grid(1.0 / 3.0, 2.0 / 3.0, 12)
    engine = HomotopyEngine(build_net(g, 1.0 / 6.0))
    report = critical_spectrum(engine, eps_min=0.3, eps_max=0.7, eta=1.0 / 12.0, workers=4)
    assert [e.multiplicity for e in report.entries] == [1, 1]
    assert report.values[0] == pytest.approx(2.0 / 3.0, abs=1.0 / 6.0)
    assert report.values[1] == pytest.approx(1.0 / 3.0, abs=1.0 / 6.0)


def test_scan_range_validation(circle_engine):
    with pytest.raises(DomainError):
        critical_spectrum(circle_engine, eps_min=0.01)
    with pytest.raises(DomainError):
        critical_spectrum(circle_engine, eps_min=0.4, eps_max=0.3)


def test_report_serializes(circle_engine):
    data = critical_spectrum(circle_engine, eps_min=0.25, eps_max=0.45, eta=0.04, workers=1).to_dict()
    assert data['entries'][0]['multiplicity'] == 1
    assert data['entries'][0]['certainty'] == 'certain'
    assert len(data['entries'][0]['representatives'][0]['points']) == 3


# ----------------------------------------------------------------------
# Scaling and convergence
# ----------------------------------------------------------------------

def _circle_report(length, c=1.0):
    engine = HomotopyEngine(build_net(scaled(make_circle(length), c), 0.02 * c))
    return critical_spectrum(engine, eps_min=0.05 * c, eps_max=0.45 * c, eta=0.04 * c, workers=2)


@pytest.mark.parametrize("c", [0.5, 2.0])
def test_spectrum_scales_with_the_metric(circle_engine, c):
    base = critical_spectrum(circle_engine, eps_min=0.05, eps_max=0.45, eta=0.04, workers=2)
    report = _circle_report(1.0, c)
    assert report.values == pytest.approx([c * v for v in base.values], rel=1e-9)
    assert [e.multiplicity for e in report.entries] == [e.multiplicity for e in base.entries]


def test_circle_spectra_converge_to_the_limit_value():
    values = []
    for i in (2, 4, 8, 16):
        length = 1.0 - 1.0 / i
        report = _circle_report(length)
        assert len(report.entries) == 1
        entry = report.entries[0]
        assert entry.multiplicity == 1
        assert entry.value == pytest.approx(length / 3.0, abs=entry.error)
        values.append(entry.value)
    assert abs(values[-1] - 1.0 / 3.0) <= 1.0 / 48.0 + 0.06
    assert abs(values[-1] - 1.0 / 3.0) < abs(values[0] - 1.0 / 3.0)


@pytest.mark.slow
def test_torus_values_merge_as_the_sides_meet():
    def report_for(b):
        engine = HomotopyEngine(build_net(make_torus_grid(1.0 / 3.0, b, 12), 1.0 / 6.0))
        return critical_spectrum(engine, eps_min=0.25, eps_max=0.6, eta=1.0 / 24.0, workers=4)

    apart = report_for(0.5)
    assert [e.multiplicity for e in apart.entries] == [1, 1]
    assert apart.values[0] == pytest.approx(0.5, abs=1.0 / 12.0)
    assert apart.values[1] == pytest.approx(1.0 / 3.0, abs=1.0 / 12.0)

    merged = report_for(1.0 / 3.0)
    assert [e.multiplicity for e in merged.entries] == [2]
    assert merged.values[0] == pytest.approx(1.0 / 3.0, abs=1.0 / 12.0)
