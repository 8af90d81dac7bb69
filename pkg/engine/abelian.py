"""
Abelianization
First homology of a simplified presentation in Smith-normal coordinates
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from engine.presentation import SimplifiedPresentation
from engine.smith import diagonal, invariant_factors, smith_normal_form
from engine.words import Word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class H1Class:
    """
    Coordinates in the Smith-normal basis of H1

    moduli[j] == 0 marks a free coordinate; torsion coordinates are kept
    reduced into [0, moduli[j]).
    """
    coordinates: Tuple[int, ...]
    moduli: Tuple[int, ...]

    def __post_init__(self):
        reduced = tuple(c % m if m else c for c, m in zip(self.coordinates, self.moduli))
        object.__setattr__(self, 'coordinates', reduced)

    def __add__(self, other: 'H1Class') -> 'H1Class':
        self._check(other)
        return H1Class(tuple(a + b for a, b in zip(self.coordinates, other.coordinates)), self.moduli)

    def __neg__(self) -> 'H1Class':
        return H1Class(tuple(-a for a in self.coordinates), self.moduli)

    def __sub__(self, other: 'H1Class') -> 'H1Class':
        return self + (-other)

    def _check(self, other: 'H1Class') -> None:
        if self.moduli != other.moduli:
            raise ValueError("H1 classes from different groups")

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def equal_up_to_sign(self, other: 'H1Class') -> bool:
        return self == other or self == -other

    def canonical_sign(self) -> 'H1Class':
        """The lexicographically larger of the class and its negative"""
        negative = -self
        return self if self.coordinates >= negative.coordinates else negative

    def to_list(self) -> List[int]:
        return list(self.coordinates)


class AbelianGroup:
    """
    H1 = Z^alive / rowspace(relator exponent matrix)

    With D = S * M * T, a row vector v maps to v * T; the columns whose
    invariant factor is 1 are dropped.
    """

    def __init__(self, simplified: SimplifiedPresentation):
        self.simplified = simplified
        self.n_alive = len(simplified.alive)
        self.relator_rows = simplified.relator_matrix()
        d, _, right = smith_normal_form(self.relator_rows, self.n_alive)
        factors = diagonal(d, self.n_alive)
        self._keep = [j for j, x in enumerate(factors) if x != 1]
        self._right = right
        self.moduli: Tuple[int, ...] = tuple(factors[j] for j in self._keep)
        self._images = simplified.generator_images()
        self._generator_classes = [self.from_exponents(image) for image in self._images]
        logger.debug(f"H1: rank {self.rank}, torsion {self.torsion}")

    @property
    def rank(self) -> int:
        return sum(1 for m in self.moduli if m == 0)

    @property
    def torsion(self) -> List[int]:
        return [m for m in self.moduli if m > 1]

    @property
    def zero(self) -> H1Class:
        return H1Class(tuple(0 for _ in self.moduli), self.moduli)

    def from_exponents(self, exponents: Dict[int, int]) -> H1Class:
        """Class of an exponent vector over alive generators (keyed by alive position)"""
        coords = []
        for j in self._keep:
            coords.append(sum(c * self._right[i][j] for i, c in exponents.items()))
        return H1Class(tuple(coords), self.moduli)

    def exponent_vector(self, word: Sequence[int]) -> List[int]:
        """Exponent sums over the alive generators of a word in original generators"""
        vector = [0] * self.n_alive
        for x in word:
            sign = 1 if x > 0 else -1
            for k, c in self._images[abs(x) - 1].items():
                vector[k] += sign * c
        return vector

    def class_of(self, word: Word) -> H1Class:
        """H1 class of a word over the original generators"""
        total = self.zero
        coordinates = list(total.coordinates)
        for x in word:
            generator = self._generator_classes[abs(x) - 1].coordinates
            sign = 1 if x > 0 else -1
            for j, c in enumerate(generator):
                coordinates[j] += sign * c
        return H1Class(tuple(coordinates), self.moduli)

    def quotient_invariants(self, extra_rows: Sequence[Sequence[int]]) -> Tuple[int, List[int]]:
        """(rank, torsion) of H1 modulo extra exponent vectors over the alive generators"""
        rows = [list(r) for r in self.relator_rows] + [list(r) for r in extra_rows]
        factors = invariant_factors(rows, self.n_alive)
        rank = self.n_alive - len(factors)
        return rank, [f for f in factors if f > 1]
