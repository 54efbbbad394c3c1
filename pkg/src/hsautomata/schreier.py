"""Schreier graphs and automata of finite-index subgroups of F_n.

States are right cosets; ``action[a][s]`` is the coset reached from ``s`` by
reading generator ``a``.  Every graph produced here is in canonical form:
states are numbered in breadth-first order from the basepoint, exploring
letters in alphabet order, so two graphs describe the same subgroup exactly
when their action tables are equal.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

from .errors import AlphabetMismatch, EmptyGenerators, InfiniteIndex
from .words import Alphabet, Word, empty_word, make_word

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SchreierGraph:
    alphabet: Alphabet
    action: Table
    _checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        action = tuple(tuple(row) for row in self.action)
        object.__setattr__(self, "action", action)
        if len(action) != self.alphabet.rank:
            raise ValueError("one permutation per generator required")
        d = len(action[0])
        if d < 1:
            raise ValueError("a Schreier graph has at least one state")
        for row in action:
            if len(row) != d or sorted(row) != list(range(d)):
                raise ValueError(f"letter action {row} is not a permutation of {d} states")
        if self._checked and len(orbit(action, 0)) != d:
            raise ValueError("letter permutations do not act transitively")

    @property
    def d(self) -> int:
        return len(self.action[0])

    @property
    def rank(self) -> int:
        return self.alphabet.rank

    @cached_property
    def inverse_action(self) -> Table:
        inv = []
        for row in self.action:
            r = [0] * len(row)
            for s, t in enumerate(row):
                r[t] = s
            inv.append(tuple(r))
        return tuple(inv)

    def step(self, state: int, letter: int) -> int:
        if letter > 0:
            return self.action[letter - 1][state]
        return self.inverse_action[-letter - 1][state]

    def walk(self, start: int, w: Word) -> int:
        return walk(self, start, w)

    def automaton(self, accept: int) -> "CosetAutomaton":
        return CosetAutomaton(self, accept)

    def to_json(self) -> dict:
        return {"d": self.d, "action": {name: list(row) for name, row in zip(self.alphabet.names, self.action)}}


@dataclass(frozen=True)
class CosetAutomaton:
    """Schreier graph with start state 0 (the subgroup) and one accept state."""

    graph: SchreierGraph
    accept: int

    def __post_init__(self):
        if not 0 <= self.accept < self.graph.d:
            raise ValueError(f"accept state {self.accept} outside 0..{self.graph.d - 1}")

    @property
    def start(self) -> int:
        return 0

    def accepts(self, w: Word) -> bool:
        return walk(self.graph, 0, w) == self.accept


def orbit(action: Sequence[Sequence[int]], start: int) -> list[int]:
    seen = [start]
    known = {start}
    i = 0
    while i < len(seen):
        s = seen[i]
        i += 1
        for row in action:
            t = row[s]
            if t not in known:
                known.add(t)
                seen.append(t)
    return seen


def walk(g: SchreierGraph, start: int, w: Word) -> int:
    if w.alphabet != g.alphabet:
        raise AlphabetMismatch(f"word over {w.alphabet} walked on graph over {g.alphabet}")
    s = start
    for x in w.letters:
        s = g.step(s, x)
    return s


def canonical_form(g: SchreierGraph) -> Table:
    return _canonical_table(g.action, 0)


def _canonical_table(action: Sequence[Sequence[int]], base: int) -> Table:
    order = orbit(action, base)
    label = {s: i for i, s in enumerate(order)}
    return tuple(tuple(label[row[s]] for s in order) for row in action)


def canonicalize(g: SchreierGraph) -> SchreierGraph:
    return SchreierGraph(g.alphabet, canonical_form(g), _checked=False)


@dataclass(frozen=True)
class CosetRepTable:
    reps: tuple[Word, ...]

    def __getitem__(self, i):
        return self.reps[i]

    def __len__(self):
        return len(self.reps)


def coset_reps(g: SchreierGraph) -> CosetRepTable:
    """Shortest positive word reaching each state; ties go to the lexicographically least."""
    reps: dict[int, tuple[int, ...]] = {0: ()}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for a, row in enumerate(g.action, start=1):
            t = row[s]
            if t not in reps:
                reps[t] = reps[s] + (a,)
                queue.append(t)
    return CosetRepTable(tuple(Word(g.alphabet, reps[i]) for i in range(g.d)))


class _Folder:
    """Union-find over vertices with per-letter in/out edge maps, folding as edges arrive."""

    def __init__(self, rank):
        self.rank = rank
        self.parent: list[int] = []
        self.out: list[dict[int, int]] = []
        self.inn: list[dict[int, int]] = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        self.inn.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def add_edge(self, u: int, a: int, v: int):
        u, v = self.find(u), self.find(v)
        if a in self.out[u]:
            self.merge(self.out[u][a], v)
            return
        self.out[u][a] = v
        if a in self.inn[v]:
            self.merge(self.inn[v][a], u)
        else:
            self.inn[v][a] = u

    def merge(self, x: int, y: int):
        pending = [(x, y)]
        while pending:
            x, y = pending.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if len(self.out[x]) + len(self.inn[x]) < len(self.out[y]) + len(self.inn[y]):
                x, y = y, x
            self.parent[y] = x
            for edges_x, edges_y in ((self.out[x], self.out[y]), (self.inn[x], self.inn[y])):
                for a, t in edges_y.items():
                    if a in edges_x:
                        pending.append((edges_x[a], t))
                    else:
                        edges_x[a] = t
            self.out[y] = {}
            self.inn[y] = {}


def build_schreier(generators: Sequence[Word], alphabet: Alphabet) -> SchreierGraph:
    """Fold the wedge of generator loops into the Schreier graph of the subgroup they generate.

    Raises :class:`InfiniteIndex` if the folded graph lacks an edge, naming the
    first incomplete state (in canonical order) and the missing letter.
    """
    for w in generators:
        if w.alphabet != alphabet:
            raise AlphabetMismatch(f"generator {w} is not over {alphabet}")
    gens = [w for w in generators if len(w)]
    if not gens:
        raise EmptyGenerators(f"trivial subgroup has infinite index in the free group on {alphabet}")

    folder = _Folder(alphabet.rank)
    base = folder.new_vertex()
    for w in gens:
        cur = base
        for i, x in enumerate(w.letters):
            nxt = base if i == len(w) - 1 else folder.new_vertex()
            if x > 0:
                folder.add_edge(cur, x, nxt)
            else:
                folder.add_edge(nxt, -x, cur)
            cur = nxt

    find = folder.find
    root = find(base)
    # breadth-first over both edge directions so that incompleteness is reported deterministically
    order = [root]
    seen = {root}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for a in range(1, alphabet.rank + 1):
            for edges in (folder.out[v], folder.inn[v]):
                if a not in edges:
                    letter = alphabet.names[a - 1] if edges is folder.out[v] else alphabet.names[a - 1].upper()
                    raise InfiniteIndex(
                        f"folded graph has no {letter!r}-edge at state {i - 1}: subgroup has infinite index",
                        state=i - 1, letter=letter)
                t = find(edges[a])
                if t not in seen:
                    seen.add(t)
                    order.append(t)
    label = {v: k for k, v in enumerate(order)}
    action = tuple(tuple(label[find(folder.out[v][a])] for v in order) for a in range(1, alphabet.rank + 1))
    return canonicalize(SchreierGraph(alphabet, action))


def trivial_graph(alphabet: Alphabet) -> SchreierGraph:
    return SchreierGraph(alphabet, tuple((0,) for _ in range(alphabet.rank)))


def cyclic_graph(d: int, alphabet: Optional[Alphabet] = None) -> SchreierGraph:
    """Schreier graph of dZ in Z = F_1: a directed d-cycle."""
    alphabet = alphabet or Alphabet.of_rank(1)
    if alphabet.rank != 1:
        raise ValueError("cyclic_graph needs a rank-1 alphabet")
    return SchreierGraph(alphabet, (tuple((s + 1) % d for s in range(d)),))


def enumerate_subgroups(alphabet: Alphabet, d: int) -> Iterator[SchreierGraph]:
    """Yield one canonical Schreier graph for every subgroup of index ``d``.

    Canonical action tables are generated directly: transitions are assigned
    in breadth-first order (state, then letter) and a target not seen before
    always receives the next free label.  Each transitive tuple of
    permutations therefore appears exactly once, already relabelled.
    """
    if d < 1:
        raise ValueError("index must be >= 1")
    n = alphabet.rank
    action = [[-1] * d for _ in range(n)]
    hit = [[False] * d for _ in range(n)]
    total = d * n

    def extend(pos: int, known: int) -> Iterator[SchreierGraph]:
        if pos == total:
            if known == d:
                yield SchreierGraph(alphabet, tuple(tuple(row) for row in action), _checked=False)
            return
        s, a = divmod(pos, n)
        if s >= known:
            return
        row, used = action[a], hit[a]
        for t in range(min(known + 1, d)):
            if used[t]:
                continue
            row[s] = t
            used[t] = True
            yield from extend(pos + 1, known + (t == known))
            used[t] = False
        row[s] = -1

    yield from extend(0, 1)


def graph_from_table(alphabet: Alphabet, table: Sequence[Sequence[int]]) -> SchreierGraph:
    return SchreierGraph(alphabet, tuple(tuple(r) for r in table))


def subgroup_generators(g: SchreierGraph) -> list[Word]:
    """Free generators of the subgroup: one per non-tree edge of the BFS spanning tree."""
    reps = coset_reps(g)
    tree = set()
    for i in range(1, g.d):
        t = reps[i].letters
        tree.add((g.walk(0, Word(g.alphabet, t[:-1])), t[-1]))
    gens = []
    for a, row in enumerate(g.action, start=1):
        for s in range(g.d):
            if (s, a) not in tree:
                w = make_word(g.alphabet, reps[s].letters + (a,) + tuple(-x for x in reversed(reps[row[s]].letters)))
                gens.append(w)
    return gens


__all__ = [
    "SchreierGraph", "CosetAutomaton", "CosetRepTable", "build_schreier", "walk", "coset_reps",
    "enumerate_subgroups", "canonical_form", "canonicalize", "trivial_graph", "cyclic_graph",
    "graph_from_table", "subgroup_generators", "orbit", "empty_word",
]
