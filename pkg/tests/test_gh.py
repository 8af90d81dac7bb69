import numpy as np
import pytest
from scipy.sparse.csgraph import shortest_path

from config.errors import DomainError
from convergence.gh import distortion, gh_bounds, gh_distance_exact


def circle_metric(n, circumference):
    k = np.arange(n)
    steps = np.abs(k[:, None] - k[None, :])
    return np.minimum(steps, n - steps) * circumference / n


TRIANGLE = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
PATH = [[0, 1, 2], [1, 0, 1], [2, 1, 0]]


def test_identical_spaces():
    assert gh_distance_exact(TRIANGLE, TRIANGLE) == 0.0
    lower, upper = gh_bounds(TRIANGLE, TRIANGLE)
    assert lower == 0.0 and upper == 0.0


def test_two_point_spaces():
    assert gh_distance_exact([[0, 1], [1, 0]], [[0, 1.2], [1.2, 0]]) == pytest.approx(0.1)


def test_point_against_segment():
    assert gh_distance_exact([[0]], [[0, 2], [2, 0]]) == pytest.approx(1.0)


def test_triangle_against_path():
    assert gh_distance_exact(TRIANGLE, PATH) == pytest.approx(0.5)


def test_symmetry_and_bounds(rng):
    for _ in range(5):
        # shortest-path metrics of weighted complete graphs
        dx = _random_metric(rng, 4)
        dy = _random_metric(rng, 5)
        exact = gh_distance_exact(dx, dy)
        assert exact == pytest.approx(gh_distance_exact(dy, dx))
        lower, upper = gh_bounds(dx, dy)
        assert lower <= exact + 1e-9
        assert exact <= upper + 1e-9


def _random_metric(rng, n):
    w = rng.uniform(0.2, 1.0, size=(n, n))
    w = np.triu(w, 1)
    w = w + w.T
    return shortest_path(w, directed=False)


def test_exact_is_limited_to_small_spaces():
    with pytest.raises(DomainError):
        gh_distance_exact(circle_metric(9, 1.0), circle_metric(3, 1.0))
    with pytest.raises(DomainError):
        gh_distance_exact([[0, 1]], [[0]])
    with pytest.raises(DomainError):
        gh_bounds(np.zeros((0, 0)), [[0]])


def test_nearby_circles():
    dx, dy = circle_metric(20, 1.0), circle_metric(20, 1.1)
    lower, upper = gh_bounds(dx, dy)
    assert lower <= upper <= 0.06
    assert lower == pytest.approx(0.025)


def test_supplied_correspondence_tightens_the_upper_bound():
    dx, dy = circle_metric(20, 1.0), circle_metric(20, 1.1)
    _, upper = gh_bounds(dx, dy, {i: i for i in range(20)})
    assert upper == pytest.approx(0.025)


def test_distortion_of_identity():
    dx = circle_metric(6, 1.0)
    assert distortion(dx, 2 * dx, [(i, i) for i in range(6)]) == pytest.approx(0.5)


def test_triangle_inequality(rng):
    for _ in range(5):
        a, b, c = _random_metric(rng, 3), _random_metric(rng, 4), _random_metric(rng, 4)
        assert gh_distance_exact(a, c) <= gh_distance_exact(a, b) + gh_distance_exact(b, c) + 1e-9
