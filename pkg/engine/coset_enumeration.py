"""
Coset Enumeration
Todd-Coxeter on a Schreier coset graph, used to certify that words generate a group
"""

import logging
from typing import List, Optional, Sequence

from config.constants import COSET_TABLE_LIMIT
from engine.presentation import SimplifiedPresentation
from engine.words import Word

logger = logging.getLogger(__name__)

SENTINEL = -1


class CosetTable:
    """
    Schreier graph of a group acting on the cosets of a subgroup

    Directions are 2k for alive generator k and 2k + 1 for its inverse.
    labels is a union-find forest (labels[i] <= i); a vertex is live when
    it is its own label.
    """

    def __init__(self, n_directions: int, relators: Sequence[Sequence[int]]):
        self.n_directions = n_directions
        self.relators = [list(r) for r in relators]
        self.labels: List[int] = []
        self.neighbors: List[List[int]] = []
        self.start = self.add_vertex()

    def get_label(self, c: int) -> int:
        labels = self.labels
        root = c
        while labels[root] != root:
            root = labels[root]
        while labels[c] != root:
            labels[c], c = root, labels[c]
        return root

    def unify(self, c1: int, c2: int) -> None:
        labels = self.labels
        neighbors = self.neighbors
        to_unify = [(c1, c2)]
        while to_unify:
            c1, c2 = to_unify.pop()
            c1 = self.get_label(c1)
            c2 = self.get_label(c2)
            if c1 == c2:
                continue
            c1, c2 = min(c1, c2), max(c1, c2)
            labels[c2] = c1
            for d in range(self.n_directions):
                n1 = neighbors[c1][d]
                n2 = neighbors[c2][d]
                if n1 == SENTINEL:
                    neighbors[c1][d] = n2
                elif n2 != SENTINEL:
                    to_unify.append((n1, n2))

    def add_vertex(self) -> int:
        c = len(self.labels)
        self.labels.append(c)
        self.neighbors.append([SENTINEL] * self.n_directions)
        return c

    def follow_step(self, c: int, d: int) -> int:
        c = self.get_label(c)
        row = self.neighbors[c]
        if row[d] == SENTINEL:
            row[d] = self.add_vertex()
        return self.get_label(row[d])

    def follow_path(self, c: int, word: Sequence[int]) -> int:
        c = self.get_label(c)
        for d in reversed(word):
            c = self.follow_step(c, d)
        return c

    def __len__(self) -> int:
        return sum(1 for i, label in enumerate(self.labels) if i == label)

    def build(self, subgroup: Sequence[Sequence[int]], max_size: Optional[int] = None) -> Optional['CosetTable']:
        """Enumerate; None when more than max_size vertices were ever created"""
        for word in subgroup:
            self.unify(self.follow_path(self.start, word), self.start)
        to_visit = 0
        while to_visit < len(self.labels):
            c = self.get_label(to_visit)
            if c == to_visit:
                for relator in self.relators:
                    self.unify(self.follow_path(c, relator), c)
            to_visit += 1
            if max_size and len(self.neighbors) > max_size:
                return None
        return self


def _directions(word: Word, position: dict) -> List[int]:
    return [2 * position[abs(x) - 1] + (0 if x > 0 else 1) for x in word]


def subgroup_index(simplified: SimplifiedPresentation, words: Sequence[Word],
                   max_size: int = COSET_TABLE_LIMIT) -> Optional[int]:
    """
    Index of the subgroup generated by words (over the original generators)

    Returns None when the enumeration outgrows max_size.
    """
    position = simplified.alive_index
    n = len(simplified.alive)
    if n == 0:
        return 1
    relators = [_directions(r, position) for r in simplified.relators]
    for k in range(n):
        relators.append([2 * k, 2 * k + 1])
        relators.append([2 * k + 1, 2 * k])
    subgroup = [_directions(simplified.expand(w), position) for w in words]
    table = CosetTable(2 * n, relators).build(subgroup, max_size)
    if table is None:
        logger.debug(f"coset enumeration exceeded {max_size} cosets")
        return None
    return len(table)
