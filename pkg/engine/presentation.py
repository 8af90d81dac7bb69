"""
Rips Presentations
Fundamental group of the Rips 2-skeleton on a net, and its Tietze simplification
"""

import heapq
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from config.constants import TOLERANCE, WORD_LENGTH_CAP, EMOJI_COMPLETE
from config.enums import GroupKind
from config.errors import DomainError
from engine.words import (
    Word,
    commutator,
    cyclic_canonical,
    cyclic_reduce,
    free_reduce,
    invert,
    substitute,
)
from geometry.metric_graph import GraphPoint, Net

logger = logging.getLogger(__name__)


def rips_adjacency(net: Net, eps: float) -> np.ndarray:
    """Boolean adjacency of distinct net points closer than eps"""
    adjacency = net.distance_matrix < eps - TOLERANCE
    np.fill_diagonal(adjacency, False)
    return adjacency


@dataclass(frozen=True, eq=False)
class Presentation:
    """
    Spanning-tree presentation of the Rips 2-skeleton

    One generator per non-tree edge (i, j), i < j, in lexicographic order;
    one relator per triangle. The tree is the breadth-first tree from the
    basepoint with neighbours visited in increasing index order.
    """
    net: Net
    scale: float
    basepoint: int
    parent: Tuple[int, ...]
    generators: Tuple[Tuple[int, int], ...]
    relators: Tuple[Word, ...]
    edge_count: int
    adjacency: np.ndarray = field(repr=False)
    generator_of: Dict[Tuple[int, int], int] = field(repr=False, default_factory=dict)

    def letter(self, a: int, b: int) -> int:
        """Letter read along the Rips edge a -> b; 0 for a tree edge or a repeat"""
        if a == b:
            return 0
        if not self.adjacency[a, b]:
            raise DomainError(f"net points {a} and {b} are not within scale {self.scale:.12g}")
        g = self.generator_of.get((min(a, b), max(a, b)))
        if g is None:
            return 0
        return g + 1 if a < b else -(g + 1)

    def word_of(self, indices: Sequence[int]) -> Word:
        """Freely reduced word of an index path"""
        return free_reduce(x for x in (self.letter(a, b) for a, b in zip(indices, indices[1:])) if x)

    def tree_path(self, v: int) -> List[int]:
        """Tree path from the basepoint to v"""
        path = [v]
        while self.parent[path[-1]] >= 0:
            path.append(self.parent[path[-1]])
        return path[::-1]

    def generator_loop(self, g: int) -> List[int]:
        """Index loop at the basepoint whose word is the single generator g"""
        i, j = self.generators[g]
        return self.tree_path(i) + self.tree_path(j)[::-1]


def rips_presentation(net: Net, eps: float, basepoint: GraphPoint) -> Presentation:
    """
    Build the spanning-tree presentation of the Rips 2-skeleton at scale eps

    Raises:
        DomainError: basepoint not in the net, or the Rips graph is disconnected
    """
    root = net.index_of(basepoint)
    if eps <= 2 * net.resolution:
        logger.warning(f"scale {eps:.6g} is not above twice the net resolution {net.resolution:.6g}")
    adjacency = rips_adjacency(net, eps)
    n = len(net)
    neighbours = [np.flatnonzero(adjacency[i]) for i in range(n)]

    parent = [-2] * n
    parent[root] = -1
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in neighbours[x]:
            y = int(y)
            if parent[y] == -2:
                parent[y] = x
                queue.append(y)
    if any(p == -2 for p in parent):
        raise DomainError(f"Rips graph on the net is disconnected at scale {eps:.12g}")

    tree = {(min(v, p), max(v, p)) for v, p in enumerate(parent) if p >= 0}
    upper = np.argwhere(np.triu(adjacency, 1))
    generators = [(int(i), int(j)) for i, j in upper if (int(i), int(j)) not in tree]
    generator_of = {edge: g for g, edge in enumerate(generators)}

    def letter(a: int, b: int) -> int:
        g = generator_of.get((a, b))
        return 0 if g is None else g + 1

    relators: List[Word] = []
    for i in range(n):
        later = neighbours[i][neighbours[i] > i]
        for position, j in enumerate(later):
            j = int(j)
            rest = later[position + 1:]
            for k in rest[adjacency[j, rest]]:
                k = int(k)
                word = cyclic_reduce(x for x in (letter(i, j), letter(j, k), -letter(i, k)) if x)
                if word:
                    relators.append(word)

    logger.debug(f"Rips presentation at {eps:.6g}: {len(generators)} generators, {len(relators)} relators")
    return Presentation(
        net=net,
        scale=float(eps),
        basepoint=root,
        parent=tuple(parent),
        generators=tuple(generators),
        relators=tuple(relators),
        edge_count=len(upper),
        adjacency=adjacency,
        generator_of=generator_of,
    )


@dataclass(eq=False)
class SimplifiedPresentation:
    """
    Result of Tietze elimination

    alive are the surviving original generators; eliminations records, in
    order, each removed generator with the word (over generators alive at
    that moment) it equals.
    """
    n_generators: int
    alive: Tuple[int, ...]
    relators: Tuple[Word, ...]
    eliminations: Tuple[Tuple[int, Word], ...]
    kind: GroupKind
    _expansions: Dict[int, Word] = field(default_factory=dict, repr=False)

    @property
    def alive_index(self) -> Dict[int, int]:
        return {g: i for i, g in enumerate(self.alive)}

    def generator_images(self) -> List[Dict[int, int]]:
        """Exponent-sum image of every original generator over the alive ones"""
        index = self.alive_index
        images: List[Optional[Dict[int, int]]] = [None] * self.n_generators
        for g in self.alive:
            images[g] = {index[g]: 1}
        for g, value in reversed(self.eliminations):
            total: Dict[int, int] = {}
            for x in value:
                sign = 1 if x > 0 else -1
                for k, c in images[abs(x) - 1].items():
                    total[k] = total.get(k, 0) + sign * c
            images[g] = {k: c for k, c in total.items() if c}
        return images

    def relator_matrix(self) -> List[List[int]]:
        index = self.alive_index
        rows = []
        for word in self.relators:
            row = [0] * len(self.alive)
            for x in word:
                row[index[abs(x) - 1]] += 1 if x > 0 else -1
            rows.append(row)
        return rows

    def _expand_generator(self, g: int) -> Word:
        if g in self._expansions:
            return self._expansions[g]
        values = dict(self.eliminations)
        order = {gen: position for position, (gen, _) in enumerate(self.eliminations)}
        pending = [g]
        # later eliminations only mention generators eliminated after them
        needed: Set[int] = set()
        while pending:
            x = pending.pop()
            if x in needed or x in self._expansions or x not in values:
                continue
            needed.add(x)
            pending.extend(abs(y) - 1 for y in values[x])
        for x in sorted(needed, key=lambda gen: -order[gen]):
            letters: List[int] = []
            for y in values[x]:
                expanded = self._expansions.get(abs(y) - 1, (abs(y),))
                letters.extend(expanded if y > 0 else invert(expanded))
            self._expansions[x] = free_reduce(letters)
        return self._expansions.get(g, (g + 1,))

    def expand(self, word: Sequence[int]) -> Word:
        """Rewrite a word over original generators into the alive generators"""
        letters: List[int] = []
        for x in word:
            expanded = self._expand_generator(abs(x) - 1)
            letters.extend(expanded if x > 0 else invert(expanded))
        return free_reduce(letters)

    def with_relators(self, extra: Sequence[Word], cap: int = WORD_LENGTH_CAP) -> 'SimplifiedPresentation':
        """Quotient by extra words over the original generators, simplified again"""
        base = [self.expand(w) for w in extra]
        restored = list(self.relators) + [w for w in base if w]
        # eliminated generators stay eliminated; their values live in self.eliminations
        quotient = simplify(self.n_generators, restored, cap=cap, fixed=set(g for g, _ in self.eliminations))
        return SimplifiedPresentation(
            n_generators=self.n_generators,
            alive=quotient.alive,
            relators=quotient.relators,
            eliminations=self.eliminations + quotient.eliminations,
            kind=quotient.kind,
        )


def recognise(alive: Sequence[int], relators: Sequence[Word]) -> GroupKind:
    """Trivial, free, abelian (every pair of generators commutes by a relator) or unknown"""
    if not alive:
        return GroupKind.TRIVIAL
    if not relators:
        return GroupKind.FREE
    if len(alive) == 1:
        return GroupKind.ABELIAN
    classes = {cyclic_canonical(w) for w in relators}
    for position, a in enumerate(alive):
        for b in alive[position + 1:]:
            if cyclic_canonical(commutator(a, b)) not in classes:
                return GroupKind.UNKNOWN
    return GroupKind.ABELIAN


def simplify(n_generators: int, relators: Sequence[Word], cap: int = WORD_LENGTH_CAP,
             fixed: Optional[Set[int]] = None) -> SimplifiedPresentation:
    """
    Tietze elimination, shortest relators first

    A generator occurring exactly once in a relator is solved for and
    substituted everywhere, unless that would push some relator past cap.
    Relators are kept cyclically reduced and deduplicated up to rotation
    and inversion. Generators in fixed are treated as already gone.
    """
    relator_words: Dict[int, Word] = {}
    by_class: Dict[Word, int] = {}
    occurrences: Dict[int, Set[int]] = {}
    heap: List[Tuple[int, int]] = []
    counter = [0]

    def add(word: Sequence[int]) -> None:
        word = cyclic_reduce(word)
        if not word:
            return
        canonical = cyclic_canonical(word)
        if canonical in by_class:
            return
        rid = counter[0]
        counter[0] += 1
        relator_words[rid] = word
        by_class[canonical] = rid
        for x in word:
            occurrences.setdefault(abs(x) - 1, set()).add(rid)
        heapq.heappush(heap, (len(word), rid))

    def drop(rid: int) -> Word:
        word = relator_words.pop(rid)
        canonical = cyclic_canonical(word)
        if by_class.get(canonical) == rid:
            del by_class[canonical]
        for x in word:
            occurrences.get(abs(x) - 1, set()).discard(rid)
        return word

    for word in relators:
        add(word)

    gone = set(fixed or ())
    alive = set(range(n_generators)) - gone
    eliminations: List[Tuple[int, Word]] = []

    while heap:
        size, rid = heapq.heappop(heap)
        word = relator_words.get(rid)
        if word is None or len(word) != size:
            continue
        counts = Counter(abs(x) for x in word)
        for a in sorted(c for c, k in counts.items() if k == 1):
            g = a - 1
            position = next(p for p, x in enumerate(word) if abs(x) == a)
            rest = word[position + 1:] + word[:position]
            value = invert(rest) if word[position] > 0 else rest
            others = [r for r in occurrences.get(g, ()) if r != rid]
            growth = len(value) - 1
            if any(len(relator_words[r]) + growth * sum(1 for x in relator_words[r] if abs(x) == a) > cap
                   for r in others):
                continue
            drop(rid)
            for r in sorted(others):
                if r in relator_words:
                    add(substitute(drop(r), g, value))
            alive.discard(g)
            eliminations.append((g, value))
            break

    alive_sorted = tuple(sorted(alive))
    final = tuple(relator_words[r] for r in sorted(relator_words))
    kind = recognise(alive_sorted, final)
    logger.debug(f"{EMOJI_COMPLETE} Tietze: {n_generators} -> {len(alive_sorted)} generators, "
                 f"{len(final)} relators, kind {kind.value}")
    return SimplifiedPresentation(
        n_generators=n_generators,
        alive=alive_sorted,
        relators=final,
        eliminations=tuple(eliminations),
        kind=kind,
    )
