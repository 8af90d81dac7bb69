"""
Words in free groups
Letters are nonzero ints: +(g+1) for generator g, -(g+1) for its inverse
"""

from typing import Dict, Iterable, Tuple

Word = Tuple[int, ...]


def invert(word: Iterable[int]) -> Word:
    return tuple(-x for x in reversed(tuple(word)))


def free_reduce(letters: Iterable[int]) -> Word:
    stack = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def cyclic_reduce(letters: Iterable[int]) -> Word:
    word = free_reduce(letters)
    i, j = 0, len(word)
    while j - i >= 2 and word[i] == -word[j - 1]:
        i += 1
        j -= 1
    return word[i:j]


def cyclic_canonical(letters: Iterable[int]) -> Word:
    """Least rotation of the word or its inverse; names a conjugacy class up to inversion"""
    word = cyclic_reduce(letters)
    if not word:
        return ()
    inverse = invert(word)
    return min(min(w[k:] + w[:k] for k in range(len(w))) for w in (word, inverse))


def substitute(word: Word, generator: int, value: Word) -> Word:
    """Replace every occurrence of generator by value (and its inverse by value^-1)"""
    letter = generator + 1
    inverse_value = invert(value)
    out = []
    for x in word:
        if x == letter:
            out.extend(value)
        elif x == -letter:
            out.extend(inverse_value)
        else:
            out.append(x)
    return tuple(out)


def exponent_sums(word: Iterable[int]) -> Dict[int, int]:
    sums: Dict[int, int] = {}
    for x in word:
        g = abs(x) - 1
        sums[g] = sums.get(g, 0) + (1 if x > 0 else -1)
    return {g: s for g, s in sums.items() if s}


def commutator(a: int, b: int) -> Word:
    """[a, b] on generators a and b"""
    return (a + 1, b + 1, -(a + 1), -(b + 1))
