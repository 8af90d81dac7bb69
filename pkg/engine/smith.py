"""
Smith normal form over the integers
Exact arithmetic on lists of Python ints; returns D = S * A * T with S, T unimodular
"""

import logging
from typing import List, Sequence, Tuple

logger = logging.getLogger(__name__)

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _swap_rows(matr: Matrix, i: int, j: int) -> None:
    matr[i], matr[j] = matr[j], matr[i]


def _swap_cols(matr: Matrix, i: int, j: int) -> None:
    for row in matr:
        row[i], row[j] = row[j], row[i]


def _add_row(matr: Matrix, target: int, source: int, q: int) -> None:
    """row target += q * row source"""
    src = matr[source]
    matr[target] = [a + q * b for a, b in zip(matr[target], src)]


def _add_col(matr: Matrix, target: int, source: int, q: int) -> None:
    """col target += q * col source"""
    for row in matr:
        row[target] += q * row[source]


def _negate_row(matr: Matrix, i: int) -> None:
    matr[i] = [-a for a in matr[i]]


# Moves the least nonzero entry of the block starting at [s, s] to the pivot
def _move_least_to_start(matr: Matrix, left: Matrix, right: Matrix, s: int) -> bool:
    rows, cols = len(matr), len(matr[0])
    pos = None
    num = 0
    for i in range(s, rows):
        for j in range(s, cols):
            value = abs(matr[i][j])
            if value and (pos is None or value < num):
                pos, num = (i, j), value
    if pos is None:
        return False
    if pos[0] != s:
        _swap_rows(matr, s, pos[0])
        _swap_rows(left, s, pos[0])
    if pos[1] != s:
        _swap_cols(matr, s, pos[1])
        _swap_cols(right, s, pos[1])
    return True


# Reduces the pivot row and column modulo the pivot
def _modify_edging(matr: Matrix, left: Matrix, right: Matrix, s: int) -> None:
    rows, cols = len(matr), len(matr[0])
    pivot = matr[s][s]
    for i in range(s + 1, rows):
        if matr[i][s]:
            q = matr[i][s] // pivot
            _add_row(matr, i, s, -q)
            _add_row(left, i, s, -q)
    for j in range(s + 1, cols):
        if matr[s][j]:
            q = matr[s][j] // pivot
            _add_col(matr, j, s, -q)
            _add_col(right, j, s, -q)


# Moves the least nonzero entry of the pivot row/column to the pivot
def _move_least_edging_to_start(matr: Matrix, left: Matrix, right: Matrix, s: int) -> None:
    rows, cols = len(matr), len(matr[0])
    pos = (s, s)
    num = abs(matr[s][s])
    for i in range(s + 1, rows):
        if matr[i][s] and abs(matr[i][s]) < num:
            pos, num = (i, s), abs(matr[i][s])
    for j in range(s + 1, cols):
        if matr[s][j] and abs(matr[s][j]) < num:
            pos, num = (s, j), abs(matr[s][j])
    if pos[1] == s and pos[0] > s:
        _swap_rows(matr, s, pos[0])
        _swap_rows(left, s, pos[0])
    elif pos[0] == s and pos[1] > s:
        _swap_cols(matr, s, pos[1])
        _swap_cols(right, s, pos[1])


def _edging_is_zero(matr: Matrix, s: int) -> bool:
    rows, cols = len(matr), len(matr[0])
    return (all(matr[i][s] == 0 for i in range(s + 1, rows)) and
            all(matr[s][j] == 0 for j in range(s + 1, cols)))


# Finds an entry of the trailing block not divisible by the pivot
def _non_divisible_row(matr: Matrix, s: int) -> int:
    rows, cols = len(matr), len(matr[0])
    pivot = matr[s][s]
    for i in range(s + 1, rows):
        for j in range(s + 1, cols):
            if matr[i][j] % pivot:
                return i
    return -1


def smith_normal_form(matrix: Sequence[Sequence[int]],
                      n_cols: int = None) -> Tuple[Matrix, Matrix, Matrix]:
    """
    Smith normal form with transforms

    Args:
        matrix: m x n integer rows
        n_cols: column count, needed when matrix has no rows

    Returns:
        (D, S, T) with D = S * A * T diagonal, nonnegative, each diagonal
        entry dividing the next
    """
    matr = [[int(x) for x in row] for row in matrix]
    rows = len(matr)
    cols = len(matr[0]) if matr else (n_cols or 0)
    left, right = identity(rows), identity(cols)
    if rows == 0 or cols == 0:
        return matr, left, right

    for s in range(min(rows, cols)):
        if not _move_least_to_start(matr, left, right, s):
            break
        while True:
            _modify_edging(matr, left, right, s)
            if not _edging_is_zero(matr, s):
                _move_least_edging_to_start(matr, left, right, s)
                continue
            i = _non_divisible_row(matr, s)
            if i < 0:
                break
            _add_row(matr, s, i, 1)
            _add_row(left, s, i, 1)
        if matr[s][s] < 0:
            _negate_row(matr, s)
            _negate_row(left, s)
    return matr, left, right


def diagonal(matr: Matrix, n_cols: int) -> List[int]:
    """Diagonal of a Smith form padded with zeros to n_cols entries"""
    rows = len(matr)
    return [matr[j][j] if j < rows else 0 for j in range(n_cols)]


def invariant_factors(matrix: Sequence[Sequence[int]], n_cols: int) -> List[int]:
    """Nonzero diagonal entries of the Smith form"""
    d, _, _ = smith_normal_form(matrix, n_cols)
    return [x for x in diagonal(d, n_cols) if x]


def left_kernel(matrix: Sequence[Sequence[int]], n_cols: int) -> Matrix:
    """Integer basis of {x : x * A = 0}"""
    d, left, _ = smith_normal_form(matrix, n_cols)
    rank = sum(1 for x in diagonal(d, n_cols)[:len(d)] if x)
    return [list(row) for row in left[rank:]]


def lattice_contains(rows: Sequence[Sequence[int]], vector: Sequence[int]) -> bool:
    """Whether vector is an integer combination of rows"""
    n = len(vector)
    if not rows:
        return all(v == 0 for v in vector)
    d, _, right = smith_normal_form(rows, n)
    transformed = [sum(vector[i] * right[i][j] for i in range(n)) for j in range(n)]
    for j, factor in enumerate(diagonal(d, n)):
        if factor == 0:
            if transformed[j] != 0:
                return False
        elif transformed[j] % factor:
            return False
    return True


def lattice_equal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], n_cols: int) -> bool:
    return (all(lattice_contains(b, row) for row in a if len(row) == n_cols) and
            all(lattice_contains(a, row) for row in b if len(row) == n_cols))
