"""Coset partitions of F_n: exact verification and the period-based analyses.

A partition is decided on the product automaton: start from the tuple of
basepoints and apply positive letters.  Every letter permutes the states of
every part, so the set of tuples reachable by positive words is an orbit of
the whole free group.  Checking that each reachable tuple sits in exactly
one accept state therefore decides a partition of F_n, not only of the
positive monoid.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd, lcm
from typing import Optional, Sequence

from .errors import AlphabetMismatch, InvalidPartition, PeriodAbsent
from .polynomials import Poly, RationalFunction
from .schreier import CosetAutomaton, SchreierGraph, canonical_form, coset_reps
from .spectral import TransitionMatrix, count_words, generating_function, min_exponents, period
from .words import Word


@dataclass(frozen=True)
class Part:
    graph: SchreierGraph
    accept: int
    name: str = ""
    rep: Optional[Word] = None

    @property
    def d(self) -> int:
        return self.graph.d

    @property
    def automaton(self) -> CosetAutomaton:
        return CosetAutomaton(self.graph, self.accept)

    def representative(self) -> Word:
        return self.rep if self.rep is not None else coset_reps(self.graph)[self.accept]

    def key(self) -> tuple:
        return (self.graph.d, canonical_form(self.graph), self.accept)


class CosetPartition:
    """A list of cosets H_i alpha_i over one alphabet, claimed to partition F_n."""

    def __init__(self, parts: Sequence[Part]):
        parts = tuple(parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        alphabet = parts[0].graph.alphabet
        for p in parts:
            if p.graph.alphabet != alphabet:
                raise AlphabetMismatch(f"part {p.name or p.accept} is over {p.graph.alphabet}, expected {alphabet}")
        self.parts = parts
        self.alphabet = alphabet

    @classmethod
    def from_cosets(cls, cosets: Sequence[tuple[SchreierGraph, int]], names=None) -> "CosetPartition":
        names = names or [""] * len(cosets)
        return cls([Part(g, f, name) for (g, f), name in zip(cosets, names)])

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    @property
    def indices(self) -> list[int]:
        return [p.d for p in self.parts]

    @cached_property
    def periods(self) -> list[int]:
        return [period(p.graph) for p in self.parts]

    @cached_property
    def residues(self) -> list[int]:
        """m_i = shortest path length 0 -> f_i, reduced mod the part's period."""
        return [min_exponents(p.graph).row(0)[p.accept] % h for p, h in zip(self.parts, self.periods)]

    def key(self) -> tuple:
        return tuple(sorted(p.key() for p in self.parts))

    def describe(self) -> list[str]:
        return [f"{p.name or 'H' + str(i)}*{p.representative() or 'e'}" for i, p in enumerate(self.parts)]


@dataclass
class PartitionReport:
    valid: bool
    witness: Optional[Word]
    witness_coverage: Optional[int]
    density: Fraction
    multiplicity: bool
    reachable: int

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "witness": None if self.witness is None else str(self.witness),
            "witness_coverage": self.witness_coverage,
            "density": rational_json(self.density),
            "multiplicity": self.multiplicity,
            "reachable_tuples": self.reachable,
        }


def rational_json(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def has_multiplicity(indices: Sequence[int]) -> bool:
    return len(set(indices)) < len(indices)


def product_reachable(graphs: Sequence[SchreierGraph]) -> dict[tuple, tuple[int, ...]]:
    """Reachable state tuples mapped to their shortest-then-lex positive word."""
    start = (0,) * len(graphs)
    words = {start: ()}
    queue = deque([start])
    rank = graphs[0].rank
    actions = [g.action for g in graphs]
    while queue:
        state = queue.popleft()
        w = words[state]
        for a in range(rank):
            nxt = tuple(act[a][s] for act, s in zip(actions, state))
            if nxt not in words:
                words[nxt] = w + (a + 1,)
                queue.append(nxt)
    return words


def verify_partition(p: CosetPartition) -> PartitionReport:
    graphs = [part.graph for part in p]
    accepts = [part.accept for part in p]
    reached = product_reachable(graphs)
    witness = coverage = None
    # dict order is BFS discovery order, which is shortest-then-lex order of the witnesses
    for state, w in reached.items():
        hits = sum(s == f for s, f in zip(state, accepts))
        if hits != 1:
            witness, coverage = Word(p.alphabet, w), hits
            break
    return PartitionReport(
        valid=witness is None,
        witness=witness,
        witness_coverage=coverage,
        density=density_check(p),
        multiplicity=has_multiplicity(p.indices),
        reachable=len(reached),
    )


def density_check(p) -> Fraction:
    indices = p.indices if isinstance(p, CosetPartition) else p
    return sum((Fraction(1, d) for d in indices), Fraction(0))


def _rows_with_period(p: CosetPartition, h: int) -> list[int]:
    rows = [i for i, hi in enumerate(p.periods) if hi == h]
    if not rows:
        raise PeriodAbsent(f"no part has period {h} (periods: {p.periods})")
    return rows


def build_C_matrix(p: CosetPartition, h: int) -> list[list[Fraction]]:
    """Rows: parts of period h, in partition order.  Entry h/d_i at column m_i mod h."""
    rows = _rows_with_period(p, h)
    out = []
    for i in rows:
        row = [Fraction(0)] * h
        row[p.residues[i] % h] = Fraction(h, p.parts[i].d)
        out.append(row)
    return out


def build_D_matrix(p: CosetPartition, h: int, h_small: int, full: bool = False) -> list[list[Fraction]]:
    """Joint table for two periods h_small < h: period-h_small rows first, then period-h rows.

    A row of period q has h_small/d_i (resp. h/d_i) at every column j with
    j = m_i (mod q).  The pattern repeats every lcm(h, h_small) columns, so
    only that many are returned unless ``full`` asks for all 2*h*h_small.
    """
    if h_small >= h:
        raise ValueError(f"expected h' < h, got h'={h_small}, h={h}")
    small = _rows_with_period(p, h_small)
    big = _rows_with_period(p, h)
    width = 2 * h * h_small if full else lcm(h, h_small)
    out = []
    for rows, q in ((small, h_small), (big, h)):
        for i in rows:
            val = Fraction(q, p.parts[i].d)
            out.append([val if j % q == p.residues[i] else Fraction(0) for j in range(width)])
    return out


def column_sums(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    return [sum(col, Fraction(0)) for col in zip(*matrix)]


def _require_valid(p: CosetPartition):
    rep = verify_partition(p)
    if not rep.valid:
        raise InvalidPartition(f"not a coset partition; witness {str(rep.witness)!r} covered {rep.witness_coverage} times")
    if any(d <= 1 for d in p.indices):
        raise InvalidPartition("analyses require every index d_i > 1")


@dataclass
class PeriodAnalysis:
    periods: list[int]
    residues: list[int]
    H_set: list[int]
    r: dict[int, int]
    coprime: bool

    def to_json(self) -> dict:
        return {"periods": self.periods, "residues": self.residues, "H_set": self.H_set,
                "r_h": {str(h): c for h, c in self.r.items()}, "pairwise_coprime": self.coprime}


def period_analysis(p: CosetPartition) -> PeriodAnalysis:
    counts = Counter(h for h in p.periods if h > 1)
    hs = sorted(counts)
    coprime = all(gcd(x, y) == 1 for x, y in combinations(hs, 2))
    return PeriodAnalysis(list(p.periods), list(p.residues), hs, {h: counts[h] for h in hs}, coprime)


@dataclass
class Theorem1Report:
    analysis: PeriodAnalysis
    applicable: bool
    conditions: dict = field(default_factory=dict)
    predicted_multiplicity: bool = False
    actual_multiplicity: bool = False
    falsifier: bool = False
    single_period_bound: Optional[dict] = None
    divisible_bounds: list = field(default_factory=list)
    column_checks: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "analysis": self.analysis.to_json(),
            "applicable": self.applicable,
            "conditions": self.conditions,
            "predicted_multiplicity": self.predicted_multiplicity,
            "actual_multiplicity": self.actual_multiplicity,
            "falsifier": self.falsifier,
            "single_period_bound": self.single_period_bound,
            "divisible_bounds": self.divisible_bounds,
            "column_checks": self.column_checks,
            "violations": self.violations,
        }


def theorem1_analyze(p: CosetPartition) -> Theorem1Report:
    """Run the period-repetition multiplicity criterion on a verified partition.

    The criterion applies when the set of periods > 1 is nonempty and pairwise
    coprime; it predicts repeated indices once some period h is repeated
    exactly h times, or between h+1 and 2(h-1) times.  The looser reading
    r_h <= 2(h-1) is reported separately as ``r_le_2h_minus_2``.
    Side checks on the exact limit tables:

    * one period only: r >= h, and when r > h the number n0 of single-entry
      columns of C obeys 2h - r <= n0 <= h - 1;
    * coprime periods: every C has constant column sums sum 1/d_i;
    * exactly two periods h' | h: r >= h - (h/h') r', and D has constant
      column sums.
    """
    _require_valid(p)
    an = period_analysis(p)
    rep = Theorem1Report(an, applicable=bool(an.H_set) and an.coprime)
    rep.actual_multiplicity = has_multiplicity(p.indices)
    for h in an.H_set:
        r = an.r[h]
        cond = {"r": r, "r_eq_h": r == h, "h_lt_r_le_2h_minus_2": h < r <= 2 * (h - 1),
                "r_le_2h_minus_2": r <= 2 * (h - 1)}
        rep.conditions[str(h)] = cond
        if rep.applicable and (cond["r_eq_h"] or cond["h_lt_r_le_2h_minus_2"]):
            rep.predicted_multiplicity = True
    rep.falsifier = rep.predicted_multiplicity and not rep.actual_multiplicity
    if rep.falsifier:
        rep.violations.append("multiplicity predicted but indices are distinct")

    if len(an.H_set) == 1:
        h = an.H_set[0]
        r = an.r[h]
        c = build_C_matrix(p, h)
        n0 = sum(1 for col in zip(*c) if sum(1 for x in col if x) == 1)
        bound = {"h": h, "r": r, "r_ge_h": r >= h, "n0": n0}
        if r > h:
            bound["n0_in_range"] = 2 * h - r <= n0 <= h - 1
        rep.single_period_bound = bound
        if not bound["r_ge_h"] or not bound.get("n0_in_range", True):
            rep.violations.append(f"single-period bounds fail for h={h}: {bound}")

    if an.H_set and an.coprime:
        for h in an.H_set:
            rows = _rows_with_period(p, h)
            expected = sum((Fraction(1, p.parts[i].d) for i in rows), Fraction(0))
            sums = column_sums(build_C_matrix(p, h))
            ok = all(s == expected for s in sums)
            rep.column_checks.append({"matrix": "C", "h": h, "expected": rational_json(expected), "passed": ok})
            if not ok:
                rep.violations.append(f"C({h}) column sums {sums} differ from {expected}")

    if len(an.H_set) == 2:
        hs, hb = an.H_set
        rows = _rows_with_period(p, hs) + _rows_with_period(p, hb)
        expected = sum((Fraction(1, p.parts[i].d) for i in rows), Fraction(0))
        sums = column_sums(build_D_matrix(p, hb, hs))
        ok = all(s == expected for s in sums)
        rep.column_checks.append({"matrix": "D", "h": hb, "h_prime": hs, "expected": rational_json(expected), "passed": ok})
        if not ok:
            rep.violations.append(f"D({hb},{hs}) column sums {sums} differ from {expected}")
        if hb % hs == 0:
            r, r2 = an.r[hb], an.r[hs]
            lower = hb - (hb // hs) * r2
            entry = {"h": hb, "h_prime": hs, "r": r, "r_prime": r2, "lower": lower, "holds": r >= lower}
            rep.divisible_bounds.append(entry)
            if not entry["holds"]:
                rep.violations.append(f"r >= h - (h/h')r' fails: {entry}")
    return rep


@dataclass
class RepetitionReport:
    periods: list[int]
    max_period_repeats: Optional[bool]
    maximal_periods_repeat: bool
    divides_another: bool
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"periods": self.periods, "max_period_repeats": self.max_period_repeats,
                "maximal_periods_repeat": self.maximal_periods_repeat,
                "divides_another": self.divides_another, "passed": self.passed, "failures": self.failures}


def period_repetition_checks(p: CosetPartition) -> RepetitionReport:
    """The three period-repetition properties every valid partition must satisfy.

    1. the largest period, if > 1, occurs at least twice;
    2. each period > 1 that properly divides no other period occurs at least twice;
    3. each period equals or divides the period of some other part.
    """
    _require_valid(p)
    hs = list(p.periods)
    counts = Counter(hs)
    failures = []
    top = max(hs)
    max_ok = None
    if top > 1:
        max_ok = counts[top] >= 2
        if not max_ok:
            failures.append(f"maximal period {top} occurs once")
    maximal_ok = True
    for h in sorted(set(hs)):
        if h > 1 and not any(x != h and x % h == 0 for x in hs) and counts[h] < 2:
            maximal_ok = False
            failures.append(f"period {h} divides no other period yet occurs once")
    div_ok = True
    for i, h in enumerate(hs):
        if not any(hs[j] % h == 0 for j in range(len(hs)) if j != i):
            div_ok = False
            failures.append(f"period {h} of part {i} neither equals nor divides another period")
    return RepetitionReport(hs, max_ok, maximal_ok, div_ok, failures)


@dataclass
class GenfunReport:
    functions: list[RationalFunction]
    total: RationalFunction
    identity_holds: bool
    coefficients_hold: bool
    K: int

    @property
    def passed(self) -> bool:
        return self.identity_holds and self.coefficients_hold

    def to_json(self) -> dict:
        return {"p_i": [f.to_json() for f in self.functions], "sum": self.total.to_json(),
                "identity_holds": self.identity_holds, "coefficients_hold": self.coefficients_hold,
                "K": self.K, "passed": self.passed}


def genfun_report(p: CosetPartition, K: int = 20) -> GenfunReport:
    n = p.alphabet.rank
    funcs = [generating_function(part.automaton) for part in p]
    total = sum(funcs[1:], funcs[0])
    geometric = RationalFunction(Poly([1]), Poly([1, -n]))
    # cross-multiplied: total.num * (1 - nz) == total.den
    identity = (total.num * geometric.den - geometric.num * total.den).is_zero()
    coeffs = True
    a = [TransitionMatrix.from_graph(part.graph) for part in p]
    for k in range(K + 1):
        if sum(count_words(m, 0, part.accept, k) for m, part in zip(a, p)) != n**k:
            coeffs = False
            break
    return GenfunReport(funcs, total, identity, coeffs, K)


def genfun_identity_check(p: CosetPartition, K: int = 20) -> bool:
    return genfun_report(p, K).passed


def all_cosets(g: SchreierGraph, name: str = "") -> CosetPartition:
    return CosetPartition([Part(g, f, name) for f in range(g.d)])
