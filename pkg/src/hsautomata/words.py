"""Alphabets and freely reduced words of the free group F_n.

A letter is stored as a signed integer: ``+(i + 1)`` is the i-th generator,
``-(i + 1)`` its inverse.  Text uses lowercase for generators and uppercase
for inverses (``"aB"`` is a.b^-1); ``"a^4"`` and ``"a^-2"`` are accepted as
exponent sugar.  Alphabets of rank > 26 use indexed names ``x1 .. xn``.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import AlphabetMismatch, ParseError

_INDEXED = re.compile(r"x(\d+)$")


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("alphabet needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names!r}")
        for name in names:
            if not name or name != name.lower() or name == name.upper():
                raise ValueError(f"generator name {name!r} must be lowercase")

    @classmethod
    def of_rank(cls, n: int) -> "Alphabet":
        if n < 1:
            raise ValueError("rank must be >= 1")
        if n <= 26:
            return cls(tuple(string.ascii_lowercase[:n]))
        return cls(tuple(f"x{i}" for i in range(1, n + 1)))

    @property
    def rank(self) -> int:
        return len(self.names)

    def symbol(self, letter: int) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else name.upper()

    def __str__(self):
        return "{" + ",".join(self.names) + "}"


@dataclass(frozen=True)
class Word:
    """A freely reduced word; construct through :func:`make_word` or :func:`parse_word`."""

    alphabet: Alphabet
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for x, y in zip(self.letters, self.letters[1:]):
            if x == -y:
                raise ValueError("word is not freely reduced")
        for x in self.letters:
            if x == 0 or abs(x) > self.alphabet.rank:
                raise ValueError(f"letter {x} outside alphabet of rank {self.alphabet.rank}")

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return "".join(self.alphabet.symbol(x) for x in self.letters)

    def __repr__(self):
        return f"Word({str(self)!r})"

    def __mul__(self, other: "Word") -> "Word":
        return reduce_concat(self, other)

    @property
    def is_positive(self) -> bool:
        return all(x > 0 for x in self.letters)

    def inverse(self) -> "Word":
        return invert(self)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def make_word(alphabet: Alphabet, letters: Iterable[int]) -> Word:
    return Word(alphabet, free_reduce(letters))


def empty_word(alphabet: Alphabet) -> Word:
    return Word(alphabet, ())


def _symbol_table(alphabet: Alphabet) -> dict[str, int]:
    table = {}
    for i, name in enumerate(alphabet.names, start=1):
        table[name] = i
        table[name.upper()] = -i
    return table


def _tokenize(text: str, alphabet: Alphabet) -> list[int]:
    table = _symbol_table(alphabet)
    longest = max(len(s) for s in table)
    letters: list[int] = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace() or ch in "*.":
            pos += 1
            continue
        if ch == "^":
            m = re.match(r"\^(-?\d+)", text[pos:])
            if m is None or not letters:
                raise ParseError(f"bad exponent at position {pos}", "^", pos)
            exp = int(m.group(1))
            last = letters.pop()
            letters.extend([last if exp >= 0 else -last] * abs(exp))
            pos += len(m.group(0))
            continue
        for size in range(min(longest, len(text) - pos), 0, -1):
            tok = text[pos:pos + size]
            if tok in table:
                # an indexed name must not be a prefix of a longer number, e.g. x1 in x12
                if _INDEXED.match(tok.lower()) and pos + size < len(text) and text[pos + size].isdigit():
                    continue
                letters.append(table[tok])
                pos += size
                break
        else:
            raise ParseError(f"unknown symbol {ch!r} at position {pos} for alphabet {alphabet}", ch, pos)
    return letters


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse ``text`` over ``alphabet`` and return its free reduction.

    >>> ab = Alphabet(("a", "b"))
    >>> str(parse_word("aB", ab)), str(parse_word("aA", ab)), str(parse_word("a^2B^2", ab))
    ('aB', '', 'aaBB')
    """
    return make_word(alphabet, _tokenize(text, alphabet))


def reduce_concat(u: Word, v: Word) -> Word:
    if u.alphabet != v.alphabet:
        raise AlphabetMismatch(f"cannot multiply words over {u.alphabet} and {v.alphabet}")
    left = list(u.letters)
    right = v.letters
    i = 0
    while left and i < len(right) and left[-1] == -right[i]:
        left.pop()
        i += 1
    return Word(u.alphabet, tuple(left) + right[i:])


def invert(w: Word) -> Word:
    return Word(w.alphabet, tuple(-x for x in reversed(w.letters)))


def parse_words(texts: Sequence[str], alphabet: Alphabet) -> list[Word]:
    return [parse_word(t, alphabet) for t in texts]
