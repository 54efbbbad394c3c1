"""Exact linear algebra on transition matrices of Schreier graphs.

All values are Python integers or :class:`fractions.Fraction`; floats appear
only as the tolerance threshold in :func:`check_limits`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import NotIrreducible
from .polynomials import Poly, RationalFunction, poly_det
from .schreier import CosetAutomaton, SchreierGraph

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class TransitionMatrix:
    entries: Matrix

    def __post_init__(self):
        entries = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        if any(len(row) != len(entries) for row in entries):
            raise ValueError("transition matrix must be square")
        if any(x < 0 for row in entries for x in row):
            raise ValueError("transition matrix must be non-negative")

    @classmethod
    def from_graph(cls, g: SchreierGraph) -> "TransitionMatrix":
        a = [[0] * g.d for _ in range(g.d)]
        for row in g.action:
            for s, t in enumerate(row):
                a[s][t] += 1
        return cls(tuple(tuple(r) for r in a))

    @property
    def d(self) -> int:
        return len(self.entries)

    @property
    def n(self):
        """Common row/column sum, or None when the sums are not all equal."""
        sums = {sum(row) for row in self.entries} | {sum(col) for col in zip(*self.entries)}
        return sums.pop() if len(sums) == 1 else None

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "TransitionMatrix") -> "TransitionMatrix":
        return TransitionMatrix(matmul(self.entries, other.entries))

    def power(self, k: int) -> Matrix:
        return matpow(self.entries, k)

    def successors(self, i: int) -> list[int]:
        return [j for j, x in enumerate(self.entries[i]) if x]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def matpow(a: Sequence[Sequence[int]], k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative matrix power")
    result = identity(len(a))
    base = tuple(tuple(r) for r in a)
    while k:
        if k & 1:
            result = matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return result


def _as_matrix(a) -> TransitionMatrix:
    if isinstance(a, TransitionMatrix):
        return a
    if isinstance(a, SchreierGraph):
        return TransitionMatrix.from_graph(a)
    return TransitionMatrix(a)


def _bfs_levels(a: TransitionMatrix, source: int = 0) -> list:
    level = [None] * a.d
    level[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in a.successors(u):
            if level[v] is None:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def _require_irreducible(a: TransitionMatrix) -> list[list[int]]:
    rows = [_bfs_levels(a, i) for i in range(a.d)]
    for i, lv in enumerate(rows):
        if any(x is None for x in lv):
            j = lv.index(None)
            raise NotIrreducible(f"state {j} is unreachable from state {i}")
    return rows


def period(a) -> int:
    """Period of an irreducible non-negative matrix.

    Uses gcd over all edges u -> v of level(u) + 1 - level(v), with levels
    taken from a breadth-first search at state 0.
    """
    a = _as_matrix(a)
    _require_irreducible(a)
    level = _bfs_levels(a)
    h = 0
    for u in range(a.d):
        for v in a.successors(u):
            h = gcd(h, level[u] + 1 - level[v])
    return h


@dataclass(frozen=True)
class MinExponents:
    m: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij):
        i, j = ij
        return self.m[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.m[i]


def min_exponents(a) -> MinExponents:
    """m[i][j] = least k >= 0 with (A^k)_ij != 0, i.e. the directed distance i -> j.

    This can exceed the period when h < d; only its residue mod h matters downstream.
    """
    a = _as_matrix(a)
    return MinExponents(tuple(tuple(row) for row in _require_irreducible(a)))


def count_words(a, b: int, f: int, k: int) -> int:
    return _as_matrix(a).power(k)[b][f]


def build_B_matrix(g: SchreierGraph) -> list[list[Fraction]]:
    """d x h table of limiting proportions of long positive words per coset and length residue.

    Row i is nonzero only at column m_{0i} mod h, where the limit equals h/d.
    """
    a = TransitionMatrix.from_graph(g)
    h = period(a)
    m0 = min_exponents(a).row(0)
    val = Fraction(h, g.d)
    return [[val if m0[i] % h == j else Fraction(0) for j in range(h)] for i in range(g.d)]


@dataclass(frozen=True)
class LimitData:
    d: int

    @property
    def v_L(self) -> list[Fraction]:
        return [Fraction(1, self.d)] * self.d

    @property
    def v_R(self) -> list[int]:
        return [1] * self.d

    @property
    def P(self) -> list[list[Fraction]]:
        return [[r * l for l in self.v_L] for r in self.v_R]


@dataclass
class LimitReport:
    K: int
    tol: Fraction
    period: int
    horizon_ok: bool = True
    passed: bool = True
    cells: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"K": self.K, "tol": str(self.tol), "period": self.period, "horizon_ok": self.horizon_ok, "passed": self.passed, "cells": self.cells}


def check_limits(g: SchreierGraph, K: int, tol=Fraction(1, 10**6)) -> LimitReport:
    """Exact check of the limiting behaviour of A^k / n^k at horizon K.

    Zero pattern: (A^k)_ij != 0 only for k >= m_ij with k = m_ij (mod h),
    for every k <= K, and over the last h steps before K every such k is
    actually hit.  Aperiodic: every entry of A^K / n^K is within tol of 1/d.
    Periodic: the Cesaro mean over k = 1..K of A^k / n^k is within tol of 1/d.
    ``horizon_ok`` records whether K >= 4*d*h, the horizon at which the
    Cesaro mean is expected to have settled; shorter horizons are still
    evaluated.
    """
    a = TransitionMatrix.from_graph(g)
    h = period(a)
    d, n = g.d, g.rank
    if K < 1:
        raise ValueError("horizon K must be positive")
    tol = Fraction(tol)
    m = min_exponents(a)
    target = Fraction(1, d)
    report = LimitReport(K, tol, h, horizon_ok=K >= 4 * d * h)

    power = identity(d)
    total = [[Fraction(0)] * d for _ in range(d)]
    pattern_ok = [[True] * d for _ in range(d)]
    for k in range(1, K + 1):
        power = matmul(power, a.entries)
        scale = Fraction(1, n**k)
        for i in range(d):
            for j in range(d):
                x = power[i][j]
                on_residue = k >= m[i, j] and (k - m[i, j]) % h == 0
                if x and not on_residue:
                    pattern_ok[i][j] = False
                # the converse only holds eventually: check it over the last full period
                if not x and on_residue and k > K - h:
                    pattern_ok[i][j] = False
                total[i][j] += x * scale

    for i in range(d):
        for j in range(d):
            if h == 1:
                dev = abs(Fraction(power[i][j], n**K) - target)
            else:
                dev = abs(total[i][j] / K - target)
            ok = dev < tol and pattern_ok[i][j]
            report.cells.append({"i": i, "j": j, "deviation": str(dev), "zero_pattern": pattern_ok[i][j], "passed": ok})
            report.passed &= ok
    return report


def divisibility_check(g: SchreierGraph) -> bool:
    return g.d % period(g) == 0


def generating_function(c: CosetAutomaton) -> RationalFunction:
    """p(z) = sum_k (A^k)_{start,accept} z^k as the (start, accept) entry of (I - zA)^-1."""
    a = TransitionMatrix.from_graph(c.graph).entries
    d = len(a)
    m = [[Poly([int(i == j), -a[i][j]]) for j in range(d)] for i in range(d)]
    b, f = c.start, c.accept
    minor = [[m[i][j] for j in range(d) if j != b] for i in range(d) if i != f]
    cof = poly_det(minor)
    if (b + f) % 2:
        cof = -cof
    return RationalFunction(cof, poly_det(m))
