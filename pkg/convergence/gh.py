"""
Gromov-Hausdorff Distance
Exact distance for tiny spaces by correspondence search, and cheap two-sided bounds
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.constants import EXACT_GH_MAX_POINTS, TOLERANCE
from config.errors import DomainError

logger = logging.getLogger(__name__)


def _as_metric(d: Sequence[Sequence[float]]) -> np.ndarray:
    m = np.asarray(d, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"distance matrix must be square, got shape {m.shape}")
    if m.shape[0] == 0:
        raise DomainError("metric spaces must be nonempty")
    return m


def distortion(dx: np.ndarray, dy: np.ndarray, pairs: Sequence[Tuple[int, int]]) -> float:
    """Largest |dX(x, x') - dY(y, y')| over pairs of the relation"""
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    return float(np.abs(dx[np.ix_(xs, xs)] - dy[np.ix_(ys, ys)]).max())


def _feasible(dx: np.ndarray, dy: np.ndarray, t: float) -> bool:
    """Is there a correspondence (graph of f: X->Y union graph of g: Y->X) of distortion <= t"""
    nx_, ny_ = len(dx), len(dy)
    pairs: List[Tuple[int, int]] = []

    def compatible(x: int, y: int) -> bool:
        return all(abs(dx[x, a] - dy[y, b]) <= t + TOLERANCE for a, b in pairs)

    def place(k: int) -> bool:
        if k == nx_ + ny_:
            return True
        options = [(k, y) for y in range(ny_)] if k < nx_ else [(x, k - nx_) for x in range(nx_)]
        for x, y in options:
            if compatible(x, y):
                pairs.append((x, y))
                if place(k + 1):
                    return True
                pairs.pop()
        return False

    return place(0)


def gh_distance_exact(dx: Sequence[Sequence[float]], dy: Sequence[Sequence[float]]) -> float:
    """
    Half the least distortion over all correspondences

    Raises:
        DomainError: either space has more than EXACT_GH_MAX_POINTS points
    """
    dx, dy = _as_metric(dx), _as_metric(dy)
    if max(len(dx), len(dy)) > EXACT_GH_MAX_POINTS:
        raise DomainError(f"exact GH distance is limited to {EXACT_GH_MAX_POINTS} points; use gh_bounds")
    candidates = np.unique(np.abs(dx.reshape(-1, 1) - dy.reshape(1, -1)))
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(dx, dy, float(candidates[mid])):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo]) / 2.0


def _hausdorff_1d(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.sort(a), np.sort(b)

    def one_sided(u: np.ndarray, v: np.ndarray) -> float:
        positions = np.clip(np.searchsorted(v, u), 1, len(v) - 1) if len(v) > 1 else np.zeros(len(u), dtype=int)
        left = np.abs(u - v[positions - 1]) if len(v) > 1 else np.abs(u - v[0])
        right = np.abs(u - v[positions]) if len(v) > 1 else left
        return float(np.minimum(left, right).max())

    return max(one_sided(a, b), one_sided(b, a))


def _greedy_correspondence(dx: np.ndarray, dy: np.ndarray,
                           seed: Optional[Dict[int, int]] = None) -> List[Tuple[int, int]]:
    """Extend a partial map x -> y greedily, then cover the missed y"""
    seed = dict(seed or {0: 0})
    pairs = sorted(seed.items())
    order = np.argsort(dx[0], kind='stable')
    for x in order:
        x = int(x)
        if x in seed:
            continue
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        cost = np.abs(dx[x, xs][None, :] - dy[:, ys]).max(axis=1)
        y = int(np.argmin(cost))
        pairs.append((x, y))
        seed[x] = y
    covered = {y for _, y in pairs}
    for y in np.argsort(dy[0], kind='stable'):
        y = int(y)
        if y in covered:
            continue
        xs = [p[0] for p in pairs]
        ys = [p[1] for p in pairs]
        cost = np.abs(dx[:, xs] - dy[y, ys][None, :]).max(axis=1)
        pairs.append((int(np.argmin(cost)), y))
        covered.add(y)
    return pairs


def gh_bounds(dx: Sequence[Sequence[float]], dy: Sequence[Sequence[float]],
              correspondence: Optional[Dict[int, int]] = None) -> Tuple[float, float]:
    """
    (lower, upper) bounds on the GH distance

    lower: half the larger of the Hausdorff distance between the sets of
    distance values and the diameter gap. upper: half the distortion of a
    greedy correspondence seeded at the base points (index 0), or of the
    completion of a supplied partial map, whichever is smaller.
    """
    dx, dy = _as_metric(dx), _as_metric(dy)
    values_x = np.unique(dx[np.triu_indices(len(dx))])
    values_y = np.unique(dy[np.triu_indices(len(dy))])
    lower = 0.5 * max(_hausdorff_1d(values_x, values_y), abs(float(dx.max()) - float(dy.max())))
    upper = 0.5 * distortion(dx, dy, _greedy_correspondence(dx, dy))
    if correspondence:
        completed = _greedy_correspondence(dx, dy, {0: 0, **correspondence})
        upper = min(upper, 0.5 * distortion(dx, dy, completed))
    return float(lower), float(max(upper, lower))
