"""
Homotopy Engine
Tri-state epsilon-nullity oracle: Null with a replayable witness, NotNull with an
H1 or free-word certificate, Unknown when the search budget runs out
"""

import heapq
import logging
import threading
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from chains.chain import (
    Chain,
    Homotopy,
    Move,
    gap_excess,
    midpoint_refinement,
    snap_moves,
)
from config.constants import (
    EMOJI_COMPLETE,
    EMOJI_WARNING,
    QUANTIZATION,
    TOLERANCE,
    WORD_LENGTH_CAP,
)
from config.enums import GroupKind, MoveKind, VerdictKind
from config.errors import DomainError, SnapError
from config.run_config import SearchBudget
from engine.abelian import AbelianGroup, H1Class
from engine.presentation import Presentation, SimplifiedPresentation, rips_presentation, simplify
from engine.words import Word
from geometry.metric_graph import GraphPoint, Net

logger = logging.getLogger(__name__)

# Slide candidates tried per interior point during best-first search
SLIDE_BRANCHING = 3
MAX_REFINEMENTS = 40

# (kind, position, net index) relative to the searched index loop
IndexMove = Tuple[MoveKind, int, int]
State = Tuple[int, ...]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a nullity query with whichever certificate backs it"""
    kind: VerdictKind
    witness: Optional[Homotopy] = None
    certificate: Optional[H1Class] = None
    word: Optional[Word] = None
    detail: str = ""

    @property
    def is_null(self) -> bool:
        return self.kind == VerdictKind.NULL

    @property
    def is_not_null(self) -> bool:
        return self.kind == VerdictKind.NOT_NULL

    @property
    def is_unknown(self) -> bool:
        return self.kind == VerdictKind.UNKNOWN

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'witness': self.witness.to_dict() if self.witness is not None else None,
            'certificate': self.certificate.to_list() if self.certificate is not None else None,
            'word': list(self.word) if self.word is not None else None,
            'detail': self.detail,
        }


@dataclass(frozen=True, eq=False)
class RipsGroup:
    """Presentation of the Rips 2-skeleton at one scale with its simplification and H1"""
    presentation: Presentation
    simplified: SimplifiedPresentation
    abelian: AbelianGroup

    @property
    def scale(self) -> float:
        return self.presentation.scale

    @property
    def net(self) -> Net:
        return self.presentation.net

    @property
    def kind(self) -> GroupKind:
        return self.simplified.kind

    def word(self, indices: Sequence[int]) -> Word:
        return self.presentation.word_of(indices)

    def class_of_indices(self, indices: Sequence[int]) -> H1Class:
        return self.abelian.class_of(self.word(indices))

    def reduced_word(self, indices: Sequence[int]) -> Word:
        """Word over the surviving generators; meaningful as a normal form for free groups"""
        return self.simplified.expand(self.word(indices))


def build_rips_group(net: Net, eps: float, basepoint: GraphPoint,
                     cap: int = WORD_LENGTH_CAP) -> RipsGroup:
    presentation = rips_presentation(net, eps, basepoint)
    simplified = simplify(len(presentation.generators), presentation.relators, cap=cap)
    return RipsGroup(presentation, simplified, AbelianGroup(simplified))


def snap_indices(loop: Chain, net: Net) -> List[int]:
    """
    Net indices of the nearest net points

    Raises:
        SnapError: a point moves by gap_excess(loop)/2 or more
    """
    limit = gap_excess(loop) / 2.0
    indices = []
    for p in loop.points:
        i, moved = net.snap(p)
        if moved >= limit - TOLERANCE:
            raise SnapError(f"snapping moves a point by {moved:.12g}, limit is {limit:.12g}")
        indices.append(i)
    return indices


def loop_indices(loop: Chain, net: Net) -> List[int]:
    """Snap indices after as many midpoint refinements as the snap needs"""
    chain = loop
    for _ in range(MAX_REFINEMENTS):
        if net.resolution < gap_excess(chain) / 2.0 - TOLERANCE:
            return snap_indices(chain, net)
        chain = midpoint_refinement(chain)
    raise DomainError(f"net resolution {net.resolution:.6g} too coarse for scale {loop.scale:.6g}")


def h1_class(loop: Chain, group: RipsGroup) -> H1Class:
    """H1 class of a loop, read on the net at the group's scale"""
    if not loop.is_loop:
        raise DomainError("h1_class needs a loop")
    loop = loop.at_scale(group.scale)
    return group.class_of_indices(loop_indices(loop, group.net))


def theta(loop: Chain, eps: float, delta: float) -> Chain:
    """The eps-chain read as a delta-chain, delta >= eps"""
    if delta < eps - TOLERANCE:
        raise DomainError(f"theta needs delta >= eps, got delta={delta} < eps={eps}")
    return loop.at_scale(eps).at_scale(delta)


class IndexLoopSearch:
    """
    Contract a loop of net indices to its base point by basic moves

    reach[a, b] holds when a == b or the net points are closer than the
    search threshold. Moves are found greedily first, then best-first.
    """

    def __init__(self, reach: np.ndarray, dist: np.ndarray, budget: SearchBudget):
        self.reach = reach
        self.dist = dist
        self.budget = budget
        self.states_visited = 0

    # ------------------------------------------------------------------
    # Transitions
    # ------------------------------------------------------------------

    def _bridge_ok(self, s: State, i: int) -> bool:
        return bool(self.reach[s[i - 1], s[i + 1]])

    def _remove(self, s: State, i: int) -> Tuple[State, List[IndexMove]]:
        return s[:i] + s[i + 1:], [(MoveKind.REMOVE, i, s[i])]

    def _cone(self, s: State, i: int, j: int, y: int) -> Tuple[State, List[IndexMove]]:
        """Replace s[i+1:j] by the single point y adjacent to all of s[i..j]"""
        moves: List[IndexMove] = [(MoveKind.INSERT, i + 1, y)]
        for k in range(i + 1, j):
            moves.append((MoveKind.REMOVE, i + 2, s[k]))
        return s[:i + 1] + (y,) + s[j:], moves

    def _slide(self, s: State, i: int, y: int) -> Tuple[State, List[IndexMove]]:
        return s[:i] + (y,) + s[i + 1:], [(MoveKind.INSERT, i, y), (MoveKind.REMOVE, i + 1, s[i])]

    def _common(self, points: Sequence[int]) -> np.ndarray:
        return np.flatnonzero(self.reach[list(points)].all(axis=0))

    def cone_point(self, s: State) -> Optional[int]:
        candidates = self._common(sorted(set(s)))
        return int(candidates[0]) if len(candidates) else None

    def _windows(self, s: State) -> List[Tuple[int, int, int]]:
        """Maximal windows (i, j, y) with j - i >= 3 whose points share a neighbour y"""
        windows = []
        n = len(s)
        for i in range(n - 3):
            common = self.reach[s[i]] & self.reach[s[i + 1]] & self.reach[s[i + 2]]
            j = i + 2
            while j + 1 < n and (common & self.reach[s[j + 1]]).any():
                common = common & self.reach[s[j + 1]]
                j += 1
            if j - i >= 3:
                windows.append((i, j, int(np.flatnonzero(common)[0])))
        return windows

    def _slides(self, s: State, i: int) -> List[int]:
        common = self._common((s[i - 1], s[i], s[i + 1]))
        candidates = [int(y) for y in common if y != s[i]]
        if not candidates:
            return []
        outer = [s[k] for k in (i - 2, i + 2) if 0 <= k < len(s)]

        def rank(y: int):
            helps = any(self.reach[y, z] for z in outer)
            return (not helps, self.dist[y, s[i - 1]] + self.dist[y, s[i + 1]], y)

        return sorted(candidates, key=rank)[:SLIDE_BRANCHING]

    def transitions(self, s: State):
        n = len(s)
        for i in range(1, n - 1):
            if self._bridge_ok(s, i):
                yield self._remove(s, i)
        for i, j, y in self._windows(s):
            yield self._cone(s, i, j, y)
        if n + 1 <= self.budget.max_points:
            for i in range(1, n - 1):
                for y in self._slides(s, i):
                    yield self._slide(s, i, y)

    def key(self, s: State) -> Tuple[int, float, float]:
        bridges = [self.dist[s[i - 1], s[i + 1]] for i in range(1, len(s) - 1)]
        length = float(sum(self.dist[a, b] for a, b in zip(s, s[1:])))
        return (len(s), float(min(bridges)) if bridges else 0.0, length)

    # ------------------------------------------------------------------
    # Search phases
    # ------------------------------------------------------------------

    def greedy(self, s: State) -> Tuple[State, List[IndexMove]]:
        """Legal removals (smallest bridge first) and shrinking window cones until stuck"""
        moves: List[IndexMove] = []
        while True:
            removable = [i for i in range(1, len(s) - 1) if self._bridge_ok(s, i)]
            if removable:
                i = min(removable, key=lambda k: (self.dist[s[k - 1], s[k + 1]], k))
                s, step = self._remove(s, i)
                moves += step
                continue
            windows = self._windows(s)
            if windows:
                i, j, y = max(windows, key=lambda w: (w[1] - w[0], -w[0]))
                s, step = self._cone(s, i, j, y)
                moves += step
                continue
            return s, moves

    def finish(self, s: State) -> Optional[List[IndexMove]]:
        """Moves taking s to its one-point loop, if a single cone does it"""
        if len(s) == 1:
            return []
        if len(s) == 2:
            return [(MoveKind.REMOVE, 1, s[1])]
        y = self.cone_point(s)
        if y is None:
            return None
        coned, moves = self._cone(s, 0, len(s) - 1, y)
        moves.append((MoveKind.REMOVE, 1, y))
        moves.append((MoveKind.REMOVE, 1, coned[0]))
        return moves

    def contract(self, start: State) -> Optional[List[IndexMove]]:
        """Index moves contracting start, or None when the budget runs out"""
        s, prefix = self.greedy(start)
        done = self.finish(s)
        if done is not None:
            return prefix + done

        parents: Dict[State, Tuple[Optional[State], List[IndexMove]]] = {s: (None, [])}
        heap = [(self.key(s), 0, s)]
        counter = 1
        while heap:
            _, _, state = heapq.heappop(heap)
            self.states_visited += 1
            if self.states_visited > self.budget.max_states:
                return None
            done = self.finish(state)
            if done is not None:
                path: List[List[IndexMove]] = [done]
                cursor: Optional[State] = state
                while cursor is not None:
                    previous, step = parents[cursor]
                    path.append(step)
                    cursor = previous
                return prefix + [m for step in reversed(path) for m in step]
            for nxt, step in self.transitions(state):
                if nxt in parents or len(nxt) > self.budget.max_points:
                    continue
                parents[nxt] = (state, step)
                heapq.heappush(heap, (self.key(nxt), counter, nxt))
                counter += 1
        return None


class HomotopyEngine:
    """
    Nullity oracle over one net

    Rips groups are built once per scale and cached; the cache is shared
    by the worker threads of the spectrum and cover builders.
    """

    def __init__(self, net: Net, basepoint: Optional[GraphPoint] = None,
                 max_states: Optional[int] = None):
        self.net = net
        self.graph = net.graph
        self.basepoint = basepoint if basepoint is not None else self.graph.vertex_point(self.graph.vertices[0])
        self.max_states = max_states
        self._groups: Dict[int, RipsGroup] = {}
        self._lock = threading.Lock()

    def group(self, eps: float) -> RipsGroup:
        key = int(round(eps * QUANTIZATION))
        with self._lock:
            if key not in self._groups:
                self._groups[key] = build_rips_group(self.net, eps, self.basepoint)
                g = self._groups[key]
                logger.info(f"{EMOJI_COMPLETE} Rips group at {eps:.6g}: kind {g.kind.value}, "
                            f"H1 rank {g.abelian.rank}, torsion {g.abelian.torsion}")
            return self._groups[key]

    def budget(self, eps: float) -> SearchBudget:
        return SearchBudget.for_scale(self.graph.diameter, eps, max_states=self.max_states)

    def h1_class(self, loop: Chain, eps: Optional[float] = None) -> H1Class:
        return h1_class(loop, self.group(eps if eps is not None else loop.scale))

    def _search_reach(self, eps: float) -> np.ndarray:
        reach = self.net.distance_matrix < eps - 2 * TOLERANCE
        np.fill_diagonal(reach, True)
        return reach

    def _prepare(self, loop: Chain, eps: float) -> Tuple[Chain, List[Move], int, List[int]]:
        """
        Refine, pad off-net endpoints and snap

        Returns the refined chain, moves so far, the index offset of the
        net loop inside the chain and that net loop's indices.
        """
        on_net = loop.first in self.net
        divisor = 2.0 if on_net else 3.0
        chain = loop
        moves: List[Move] = []
        for _ in range(MAX_REFINEMENTS):
            if self.net.resolution < gap_excess(chain) / divisor - TOLERANCE:
                break
            refined = midpoint_refinement(chain)
            moves += refined.provenance.moves
            chain = refined
        else:
            raise DomainError(f"net resolution {self.net.resolution:.6g} too coarse for scale {eps:.6g}")

        offset = 0
        points = list(chain.points)
        if not on_net:
            anchor = self.net.points[self.net.snap(chain.first)[0]]
            moves.append(Move(MoveKind.INSERT, 1, anchor))
            moves.append(Move(MoveKind.INSERT, len(points), anchor))
            points = [points[0], anchor] + points[1:-1] + [anchor, points[-1]]
            offset = 1
        inner = Chain(tuple(points[offset:len(points) - offset]), eps, self.graph)
        indices = [self.net.snap(p)[0] for p in inner.points]
        indices[0] = indices[-1] = self.net.index_of(inner.first)
        targets = [self.net.points[i] for i in indices]
        moves += [Move(m.kind, m.index + offset, m.point) for m in snap_moves(inner, targets)]
        return chain, moves, offset, indices

    def is_null(self, loop: Chain, eps: Optional[float] = None,
                budget: Optional[SearchBudget] = None) -> Verdict:
        """
        Decide whether an eps-loop is eps-null

        NotNull is certified by a nonzero H1 class or, for free groups, a
        nonempty reduced word. Null carries a homotopy that replays to the
        one-point chain. Anything else is Unknown.
        """
        eps = loop.scale if eps is None else float(eps)
        if not loop.is_loop:
            raise DomainError("is_null needs a loop")
        loop = loop.at_scale(eps)
        budget = budget or self.budget(eps)
        if len(loop) == 1:
            return Verdict(VerdictKind.NULL, witness=Homotopy(loop), detail="one-point chain")

        group = self.group(eps)
        _, moves, offset, indices = self._prepare(loop, eps)
        word = group.word(indices)
        certificate = group.abelian.class_of(word)
        if not certificate.is_zero:
            return Verdict(VerdictKind.NOT_NULL, certificate=certificate, word=word,
                           detail="nonzero H1 class")
        if group.kind == GroupKind.FREE:
            reduced = group.simplified.expand(word)
            if reduced:
                return Verdict(VerdictKind.NOT_NULL, certificate=certificate, word=reduced,
                               detail="nontrivial reduced word in a free group")

        search = IndexLoopSearch(self._search_reach(eps), self.net.distance_matrix, budget)
        found = search.contract(tuple(indices))
        if found is None:
            logger.warning(f"{EMOJI_WARNING} nullity search exhausted after {search.states_visited} states "
                           f"at scale {eps:.6g} (group kind {group.kind.value})")
            return Verdict(VerdictKind.UNKNOWN, certificate=certificate, word=word,
                           detail=f"search budget exhausted after {search.states_visited} states")

        moves += [Move(kind, position + offset, self.net.points[i]) for kind, position, i in found]
        if offset:
            moves.append(Move(MoveKind.REMOVE, 1, self.net.points[indices[0]]))
            moves.append(Move(MoveKind.REMOVE, 1, loop.first))
        witness = Homotopy(loop, tuple(moves))
        try:
            end = witness.replay()
        except DomainError as e:
            logger.error(f"witness failed to replay: {e}", exc_info=True)
            return Verdict(VerdictKind.UNKNOWN, certificate=certificate, word=word,
                           detail=f"witness failed to replay: {e}")
        if len(end) != 1:
            return Verdict(VerdictKind.UNKNOWN, certificate=certificate, word=word,
                           detail="witness does not end at a one-point chain")
        return Verdict(VerdictKind.NULL, witness=witness, certificate=certificate, word=word,
                       detail=f"contracted in {len(moves)} moves")
