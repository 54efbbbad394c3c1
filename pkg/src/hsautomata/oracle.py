"""Brute-force ground truth used by the test-suite.

Deliberately naive and self-contained: words are enumerated letter by letter
and walked on the raw action tables.  Nothing here reuses the walking,
matrix or product-automaton code it is meant to check.
"""

from __future__ import annotations

from itertools import product
from math import factorial

from .errors import BoundExceeded

MAX_COUNT_LENGTH = 16
MAX_PARTITION_LENGTH = 12


def _run(table, word) -> int:
    state = 0
    for letter in word:
        state = table[letter][state]
    return state


def brute_count(c, K: int) -> list[int]:
    """a_k = number of positive words of length k accepted by the coset automaton c, k = 0..K."""
    if K > MAX_COUNT_LENGTH:
        raise BoundExceeded(f"K = {K} exceeds the enumeration bound {MAX_COUNT_LENGTH}")
    table = c.graph.action
    n = len(table)
    return [sum(1 for w in product(range(n), repeat=k) if _run(table, w) == c.accept) for k in range(K + 1)]


def brute_partition_check(p, K: int):
    """(True, None) if every positive word of length <= K lies in exactly one part.

    Otherwise (False, word) for the first offending word, as a letter string
    in the alphabet's names.
    """
    if K > MAX_PARTITION_LENGTH:
        raise BoundExceeded(f"K = {K} exceeds the enumeration bound {MAX_PARTITION_LENGTH}")
    parts = [(part.graph.action, part.accept) for part in p.parts]
    names = p.alphabet.names
    n = len(names)
    for k in range(K + 1):
        for w in product(range(n), repeat=k):
            hits = sum(1 for table, f in parts if _run(table, w) == f)
            if hits != 1:
                return False, "".join(names[x] for x in w)
    return True, None


def hall_count(n: int, d: int) -> int:
    """Number of index-d subgroups of the free group of rank n (Hall's recurrence)."""
    if d < 1:
        raise ValueError("index must be >= 1")
    counts = [0]
    for k in range(1, d + 1):
        counts.append(k * factorial(k) ** (n - 1)
                      - sum(factorial(k - i) ** (n - 1) * counts[i] for i in range(1, k)))
    return counts[d]


def word_census(p, K: int) -> list[list[int]]:
    """a_{i,k} for each part i and k <= K."""
    return [brute_count(part, K) for part in p.parts]
