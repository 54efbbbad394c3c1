from fractions import Fraction
from itertools import product

import pytest

from hsautomata.errors import AlphabetMismatch, InvalidPartition, PeriodAbsent
from hsautomata.oracle import brute_partition_check
from hsautomata.partition import (CosetPartition, Part, all_cosets, build_C_matrix, build_D_matrix, column_sums,
                                  density_check, genfun_identity_check, genfun_report, period_analysis,
                                  period_repetition_checks, theorem1_analyze, verify_partition)
from hsautomata.polynomials import Poly, RationalFunction
from hsautomata.schreier import build_schreier, cyclic_graph, enumerate_subgroups, trivial_graph
from hsautomata.words import Alphabet, parse_words

from conftest import coset

F = Fraction


def test_hkk_is_valid(hkk):
    rep = verify_partition(hkk)
    assert rep.valid and rep.witness is None
    assert rep.reachable == 4
    assert rep.density == 1
    assert rep.multiplicity


def test_k_ka_is_invalid(K):
    p = CosetPartition([coset(K, "", "K"), coset(K, "a", "K")])
    rep = verify_partition(p)
    assert not rep.valid
    assert rep.density == F(1, 2)
    assert len(rep.witness) <= 2
    assert rep.witness_coverage == 0
    ok, word = brute_partition_check(p, 2)
    assert not ok and len(word) <= 2


def test_witness_is_shortest_then_lex(K):
    # only Ka: the empty word lies in K, not in Ka
    rep = verify_partition(CosetPartition([coset(K, "a")]))
    assert str(rep.witness) == "" and rep.witness_coverage == 0
    # K twice: every word is covered 0 or 2 times
    rep = verify_partition(CosetPartition([coset(K, ""), coset(K, "")]))
    assert str(rep.witness) == "" and rep.witness_coverage == 2


def test_overlapping_parts_witness(ab):
    full = trivial_graph(ab)
    sub = build_schreier(parse_words(["aa", "b", "aba"], ab), ab)
    p = CosetPartition([Part(full, 0), Part(sub, 1)])
    rep = verify_partition(p)
    assert not rep.valid
    assert str(rep.witness) == "a" and rep.witness_coverage == 2


def test_every_index2_with_both_cosets(ab):
    for g in enumerate_subgroups(ab, 2):
        p = all_cosets(g, "H")
        assert verify_partition(p).valid
        assert brute_partition_check(p, 8) == (True, None)


def test_alphabet_mismatch(K):
    other = cyclic_graph(2)
    with pytest.raises(AlphabetMismatch):
        CosetPartition([Part(K, 0), Part(other, 1)])


def test_density():
    assert density_check([2, 3, 6]) == 1
    assert density_check([2, 4]) == F(3, 4)


def test_C_matrices(hkk):
    assert build_C_matrix(hkk, 4) == [[0, 1, 0, 0], [0, 0, 0, 1]]
    assert build_C_matrix(hkk, 2) == [[1, 0]]
    with pytest.raises(PeriodAbsent):
        build_C_matrix(hkk, 3)


def test_C_single_index1_part(ab):
    p = CosetPartition([Part(trivial_graph(ab), 0)])
    for h in (2, 3):
        with pytest.raises(PeriodAbsent):
            build_C_matrix(p, h)


def test_D_matrix(hkk):
    d = build_D_matrix(hkk, 4, 2)
    assert d == [[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    assert column_sums(d) == [1, 1, 1, 1]
    full = build_D_matrix(hkk, 4, 2, full=True)
    assert len(full[0]) == 16
    assert all(row[:4] * 4 == row for row in full)
    with pytest.raises(PeriodAbsent):
        build_D_matrix(hkk, 6, 2)
    with pytest.raises(ValueError):
        build_D_matrix(hkk, 2, 4)


def test_period_analysis(hkk):
    an = period_analysis(hkk)
    assert an.periods == [2, 4, 4]
    assert an.H_set == [2, 4]
    assert an.r == {2: 1, 4: 2}
    assert not an.coprime
    assert an.residues == [0, 1, 3]


def test_multiplicity_criterion_two_periods(hkk):
    rep = theorem1_analyze(hkk)
    assert not rep.applicable
    assert not rep.predicted_multiplicity
    assert rep.actual_multiplicity
    assert not rep.falsifier
    assert rep.divisible_bounds == [{"h": 4, "h_prime": 2, "r": 2, "r_prime": 1, "lower": 2, "holds": True}]
    assert all(c["passed"] for c in rep.column_checks)
    assert not rep.violations


def test_multiplicity_criterion_index2_pair(H):
    p = all_cosets(H, "H")
    rep = theorem1_analyze(p)
    assert rep.applicable
    assert rep.conditions["2"]["r_eq_h"]
    assert rep.predicted_multiplicity and rep.actual_multiplicity
    assert rep.single_period_bound["r_ge_h"]
    assert not rep.violations


def test_multiplicity_criterion_integers():
    z = Alphabet(("a",))
    two, four = cyclic_graph(2), cyclic_graph(4)
    p = CosetPartition([Part(two, 0, "2Z"), Part(four, 1, "4Z"), Part(four, 3, "4Z")])
    assert verify_partition(p).valid
    assert p.alphabet == z
    assert p.periods == p.indices == [2, 4, 4]
    assert period_repetition_checks(p).passed
    assert not theorem1_analyze(p).violations


def test_analyses_require_valid(K):
    p = CosetPartition([coset(K, ""), coset(K, "a")])
    with pytest.raises(InvalidPartition):
        theorem1_analyze(p)
    with pytest.raises(InvalidPartition):
        period_repetition_checks(p)


def test_analyses_require_index_above_one(ab):
    p = CosetPartition([Part(trivial_graph(ab), 0)])
    assert verify_partition(p).valid
    with pytest.raises(InvalidPartition):
        theorem1_analyze(p)


def test_repetition_checks(hkk, H):
    rep = period_repetition_checks(hkk)
    assert rep.passed and rep.max_period_repeats and rep.divides_another
    assert period_repetition_checks(all_cosets(H)).periods == [2, 2]


def test_repetition_detects_failure(monkeypatch):
    # periods (2, 4) cannot come from a real partition; skip validation to reach the checks
    class Fake:
        periods = [2, 4]

    monkeypatch.setattr("hsautomata.partition._require_valid", lambda p: None)
    rep = period_repetition_checks(Fake())
    assert not rep.passed
    assert rep.max_period_repeats is False


def test_single_period_bounds_on_all_cosets(ab):
    """r >= h, and 2h - r <= n0 <= h - 1 when r > h, for every subgroup with all its cosets."""
    seen_r_gt_h = 0
    for d in range(2, 5):
        for g in enumerate_subgroups(ab, d):
            rep = theorem1_analyze(all_cosets(g))
            b = rep.single_period_bound
            if b is None:
                continue
            assert b["r_ge_h"]
            if b["r"] > b["h"]:
                seen_r_gt_h += 1
                assert b["n0_in_range"]
            assert not rep.violations
    assert seen_r_gt_h > 0


def test_genfun_hkk(hkk):
    rep = genfun_report(hkk, 20)
    assert rep.passed
    assert rep.functions == [
        RationalFunction(Poly([1]), Poly([1, 0, -4])),
        RationalFunction(Poly([0, 2]), Poly([1, 0, 0, 0, -16])),
        RationalFunction(Poly([0, 0, 0, 8]), Poly([1, 0, 0, 0, -16])),
    ]
    assert rep.total == RationalFunction(Poly([1]), Poly([1, -2]))


def test_genfun_single_part(ab):
    p = CosetPartition([Part(trivial_graph(ab), 0)])
    assert genfun_identity_check(p)


def test_genfun_fails_when_not_partition(K):
    p = CosetPartition([coset(K, ""), coset(K, "a")])
    rep = genfun_report(p, 10)
    assert not rep.identity_holds and not rep.coefficients_hold


def test_verify_agrees_with_brute_on_pairs(ab):
    """All choices of one coset from each of two small subgroups."""
    graphs = list(enumerate_subgroups(ab, 2)) + list(enumerate_subgroups(ab, 3))[:4]
    for g1, g2 in product(graphs, repeat=2):
        for f1, f2 in product(range(g1.d), range(g2.d)):
            p = CosetPartition([Part(g1, f1), Part(g2, f2)])
            ok, _ = brute_partition_check(p, 6)
            assert verify_partition(p).valid == ok
