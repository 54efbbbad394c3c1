import json

import pytest

from hsautomata.oracle import brute_partition_check, hall_count
from hsautomata.partition import verify_partition
from hsautomata.schreier import enumerate_subgroups
from hsautomata.search import (SearchConfig, cover_states, distinct_multisets, find_partitions, partition_corpus,
                               search_counterexamples)
from hsautomata.words import Alphabet


def test_distinct_multisets():
    assert distinct_multisets(6) == [(2, 3, 6)]
    assert distinct_multisets(12) == [(2, 3, 6), (2, 4, 6, 12)]
    assert distinct_multisets(12, max_parts=3) == [(2, 3, 6)]
    assert distinct_multisets(5) == []


def test_H_K_covers_contain_the_known_partition(H, K):
    covers = cover_states([H, K])
    assert sorted((0, 0) in c and (1, 1) in c and (1, 3) in c and len(c) == 3 for c in covers).count(True) == 1
    for p in find_partitions([H, K], ["H", "K"]):
        assert verify_partition(p).valid
        assert brute_partition_check(p, 8)[0]


def test_H_K_covers_closed_under_letters(H, K):
    graphs = [H, K]
    covers = {frozenset(c) for c in cover_states(graphs)}
    assert covers
    for c in covers:
        for x in range(2):
            moved = frozenset((i, graphs[i].action[x][f]) for i, f in c)
            assert moved in covers


def test_single_subgroup_has_one_cover(K):
    assert cover_states([K]) == [[(0, f) for f in range(4)]]
    (p,) = find_partitions([K])
    assert sorted(part.accept for part in p) == [0, 1, 2, 3]


def test_no_cover_possible(ab):
    # one coset from each of two index-4 subgroups can never reach density 1
    graphs = list(enumerate_subgroups(ab, 4))[:2]
    assert cover_states(graphs, "exactly") == []


def test_per_subgroup_modes(H, K):
    exactly = cover_states([H, K], "exactly")
    at_most = cover_states([H, K], "at_most")
    anything = cover_states([H, K])
    assert all(len({i for i, _ in c}) == 2 and len(c) == 2 for c in exactly)
    assert set(map(tuple, exactly)) <= set(map(tuple, at_most)) <= set(map(tuple, anything))
    with pytest.raises(ValueError):
        cover_states([H], "twice")


def test_search_index_pair_repeats():
    rep = search_counterexamples(SearchConfig(rank=2, indices=(2, 2)))
    assert rep.complete
    assert rep.results[0].tuples_total == 6
    assert len(rep.partitions) == 3
    assert rep.counterexamples == []


def test_search_rank_one_small():
    rep = search_counterexamples(SearchConfig(rank=1, max_index=12))
    assert rep.complete
    assert [r.indices for r in rep.results] == [(2, 3, 6), (2, 4, 6, 12)]
    assert rep.counterexamples == []


def test_sharded_equals_serial():
    base = SearchConfig(rank=2, indices=(2, 3, 4))
    serial = search_counterexamples(base).to_json()
    for shards, workers in ((3, 1), (2, 2)):
        other = search_counterexamples(SearchConfig(rank=2, indices=(2, 3, 4), shards=shards, workers=workers)).to_json()
        other["config"]["shards"] = 1
        assert other == serial


def test_max_tuples_gives_incomplete_report():
    rep = search_counterexamples(SearchConfig(rank=2, indices=(2, 3, 6), max_tuples=100))
    assert not rep.complete
    assert rep.results[0].tuples_done == 100
    assert rep.to_json()["complete"] is False


def test_checkpoint_resume(tmp_path):
    ck = tmp_path / "ck.json"
    cfg = SearchConfig(rank=2, indices=(2, 3, 4), shards=2, checkpoint=str(ck))
    first = search_counterexamples(cfg, chunk=40)
    state = json.loads(ck.read_text())
    assert state["config"] == cfg.manifest()
    # rewind one shard, as if the run had stopped half way
    s0 = state["multisets"]["2,3,4"]["0"]
    s0.update({"next": 80, "done": 40})
    ck.write_text(json.dumps(state))
    again = search_counterexamples(cfg, chunk=40)
    assert again.to_json() == first.to_json()
    assert again.results[0].tuples_done == first.results[0].tuples_total


def test_checkpoint_rejects_other_config(tmp_path):
    ck = tmp_path / "ck.json"
    search_counterexamples(SearchConfig(rank=2, indices=(2, 2), checkpoint=str(ck)))
    with pytest.raises(ValueError):
        search_counterexamples(SearchConfig(rank=2, indices=(2, 3), checkpoint=str(ck)))


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(rank=0, indices=(2,))
    with pytest.raises(ValueError):
        SearchConfig(rank=2)
    with pytest.raises(ValueError):
        SearchConfig(rank=2, indices=(2, 2), shards=0)
    assert SearchConfig(rank=2, indices=(6, 2, 3)).indices == (2, 3, 6)


def test_subgroup_counts_in_report():
    rep = search_counterexamples(SearchConfig(rank=2, indices=(2, 3), max_tuples=0))
    assert rep.results[0].subgroup_counts == {2: hall_count(2, 2), 3: hall_count(2, 3)}


def test_corpus_small():
    corpus = partition_corpus(Alphabet.of_rank(2), 3, max_subgroups=2)
    assert corpus
    keys = [p.key() for p in corpus]
    assert len(keys) == len(set(keys))
    for p in corpus:
        assert verify_partition(p).valid
