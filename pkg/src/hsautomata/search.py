"""Exhaustive desk-scale search for coset partitions with distinct indices.

Partitions of the positive monoid by Schreier automata are found as exact
covers: the elements are the state tuples reachable in the product of the
candidate graphs, and the coset (i, f) covers the tuples whose i-th
coordinate is f.  Every complete bi-deterministic strongly-connected
automaton is a Schreier automaton, so enumerating Schreier graphs covers the
whole hypothesis class of the automaton formulation of the conjecture.
"""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, islice, product
from math import comb, prod
from multiprocessing import get_context
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .errors import AlphabetMismatch
from .exactcover import exact_covers
from .partition import CosetPartition, Part, product_reachable
from .schreier import SchreierGraph, canonical_form, coset_reps, enumerate_subgroups
from .words import Alphabet

log = logging.getLogger(__name__)

THREADS_ENV = "HSAUTOMATA_THREADS"


def _cover_rows(graphs: Sequence[SchreierGraph], per_subgroup: Optional[str]):
    reached = list(product_reachable(graphs))
    index = {t: k for k, t in enumerate(reached)}
    cols = [(i, f) for i, g in enumerate(graphs) for f in range(g.d)]
    rows = []
    for i, f in cols:
        items = [index[t] for t in reached if t[i] == f]
        if per_subgroup:
            items.append(("slot", i))
        rows.append(items)
    primary = list(range(len(reached)))
    secondary = []
    slots = [("slot", i) for i in range(len(graphs))]
    if per_subgroup == "exactly":
        primary += slots
    elif per_subgroup == "at_most":
        secondary = slots
    elif per_subgroup is not None:
        raise ValueError(f"unknown per_subgroup mode {per_subgroup!r}")
    return cols, rows, primary, secondary


def cover_states(graphs: Sequence[SchreierGraph], per_subgroup: Optional[str] = None) -> list[list[tuple[int, int]]]:
    """Every exact cover as a list of (subgroup position, accept state) pairs."""
    cols, rows, primary, secondary = _cover_rows(graphs, per_subgroup)
    return [[cols[r] for r in cover] for cover in exact_covers(rows, primary, secondary)]


def find_partitions(subgroups: Sequence[SchreierGraph], names: Optional[Sequence[str]] = None,
                    per_subgroup: Optional[str] = None) -> list[CosetPartition]:
    """All coset partitions built from cosets of the given subgroups.

    ``per_subgroup`` may restrict each subgroup to ``"at_most"`` or
    ``"exactly"`` one coset; by default a subgroup may contribute any number.
    """
    if not subgroups:
        return []
    alphabet = subgroups[0].alphabet
    for g in subgroups:
        if g.alphabet != alphabet:
            raise AlphabetMismatch(f"subgroups over {g.alphabet} and {alphabet}")
    names = list(names) if names is not None else [f"H{i}" for i in range(len(subgroups))]
    out = []
    for cover in cover_states(subgroups, per_subgroup):
        out.append(CosetPartition([Part(subgroups[i], f, names[i], coset_reps(subgroups[i])[f]) for i, f in cover]))
    return out


def distinct_multisets(max_index: int, max_parts: Optional[int] = None) -> list[tuple[int, ...]]:
    """Sets of distinct indices in 2..max_index whose reciprocals sum to 1."""
    found = []

    def extend(start, chosen, total):
        if total == 1:
            found.append(tuple(chosen))
            return
        if max_parts is not None and len(chosen) >= max_parts:
            return
        for d in range(start, max_index + 1):
            t = total + Fraction(1, d)
            if t > 1:
                continue
            # the remaining indices are all >= d + 1 and distinct
            rest = sum(Fraction(1, e) for e in range(d + 1, max_index + 1))
            if t + rest < 1:
                break
            extend(d + 1, chosen + [d], t)

    extend(2, [], Fraction(0))
    return sorted(found, key=lambda m: (len(m), m))


@dataclass
class SearchConfig:
    rank: int
    indices: Optional[tuple[int, ...]] = None
    max_index: Optional[int] = None
    max_parts: Optional[int] = None
    distinct_only: bool = True
    shards: int = 1
    max_tuples: Optional[int] = None
    workers: Optional[int] = None
    checkpoint: Optional[str] = None

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        if self.indices is not None:
            self.indices = tuple(sorted(int(d) for d in self.indices))
            if not self.indices or min(self.indices) < 1:
                raise ValueError("indices must be positive")
            if self.distinct_only and len(set(self.indices)) != len(self.indices):
                self.distinct_only = False
        elif self.max_index is None:
            raise ValueError("give either indices or max_index")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")

    def multisets(self) -> list[tuple[int, ...]]:
        if self.indices is not None:
            return [self.indices]
        return distinct_multisets(self.max_index, self.max_parts)

    def manifest(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        d.pop("checkpoint")
        d["indices"] = list(self.indices) if self.indices else None
        return d


@dataclass
class MultisetResult:
    indices: tuple[int, ...]
    subgroup_counts: dict[int, int]
    tuples_total: int
    tuples_done: int = 0
    partitions: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.tuples_done == self.tuples_total

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "subgroup_counts": {str(d): c for d, c in sorted(self.subgroup_counts.items())},
            "tuples_total": self.tuples_total,
            "tuples_done": self.tuples_done,
            "complete": self.complete,
            "partitions_found": len(self.partitions),
            "partitions": self.partitions,
            "counterexamples": self.counterexamples,
        }


@dataclass
class SearchReport:
    config: SearchConfig
    results: list[MultisetResult]
    wall_seconds: float = 0.0

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.results)

    @property
    def counterexamples(self) -> list:
        return [c for r in self.results for c in r.counterexamples]

    @property
    def partitions(self) -> list:
        return [p for r in self.results for p in r.partitions]

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "config": self.config.manifest(),
            "complete": self.complete,
            "tuples_examined": sum(r.tuples_done for r in self.results),
            "partitions_found": len(self.partitions),
            "counterexamples_found": len(self.counterexamples),
            "multisets": [r.to_json() for r in self.results],
        }
        if timings:
            out["wall_seconds"] = round(self.wall_seconds, 3)
        return out


class _SubgroupCache:
    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self.lists: dict[int, list[SchreierGraph]] = {}

    def __getitem__(self, d: int) -> list[SchreierGraph]:
        if d not in self.lists:
            self.lists[d] = list(enumerate_subgroups(self.alphabet, d))
        return self.lists[d]


def _groups(indices: Sequence[int]) -> list[tuple[int, int]]:
    values = sorted(set(indices))
    return [(d, list(indices).count(d)) for d in values]


def tuple_count(indices: Sequence[int], counts: dict[int, int]) -> int:
    return prod(comb(counts[d] + c - 1, c) for d, c in _groups(indices))


def iter_tuples(indices: Sequence[int], subgroups: _SubgroupCache) -> Iterator[tuple[SchreierGraph, ...]]:
    """Subgroup tuples, one subgroup per slot; equal indices use multisets (with repetition)."""
    per_value = [list(combinations_with_replacement(subgroups[d], c)) for d, c in _groups(indices)]
    for choice in product(*per_value):
        yield tuple(g for block in choice for g in block)


def partition_record(graphs: Sequence[SchreierGraph], cover: Sequence[tuple[int, int]]) -> dict:
    parts = sorted(
        (graphs[i].d, [list(r) for r in canonical_form(graphs[i])], f, str(coset_reps(graphs[i])[f]))
        for i, f in cover)
    return {"indices": [p[0] for p in parts],
            "parts": [{"index": d, "action": a, "accept": f, "rep": rep} for d, a, f, rep in parts]}


def _record_key(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True)


def _run_shard(args) -> tuple[list[dict], int]:
    """Worker entry point: tuples numbered start <= k < stop with k = shard (mod shards)."""
    names, indices, shard, shards, start, stop = args
    cache = _SubgroupCache(Alphabet(tuple(names)))
    found = {}
    done = 0
    for k, graphs in enumerate(islice(iter_tuples(indices, cache), start, stop), start):
        if k % shards != shard:
            continue
        for cover in cover_states(graphs, "exactly"):
            rec = partition_record(graphs, cover)
            found[_record_key(rec)] = rec
        done += 1
    return [found[k] for k in sorted(found)], done


def _load_checkpoint(path: Optional[str], cfg: SearchConfig) -> dict:
    if not path or not Path(path).exists():
        return {}
    data = json.loads(Path(path).read_text())
    if data.get("config") != cfg.manifest():
        raise ValueError(f"checkpoint {path} was written for a different configuration")
    return data.get("multisets", {})


def _save_checkpoint(path: Optional[str], cfg: SearchConfig, state: dict):
    if not path:
        return
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps({"config": cfg.manifest(), "multisets": state}, sort_keys=True))
    tmp.replace(path)


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def search_counterexamples(cfg: SearchConfig, chunk: int = 50_000) -> SearchReport:
    """Look for partitions with pairwise-distinct indices over each candidate index multiset.

    Each multiset is explored over all subgroup tuples with those indices,
    each slot contributing exactly one coset.  Tuples are processed in
    chunks; inside a chunk, tuple k goes to shard k mod ``cfg.shards`` and
    shards run in worker processes when more than one worker is configured.
    After every chunk the checkpoint (if any) records, per shard, the next
    tuple number and the partitions found so far.  Results are merged and
    sorted, so the report does not depend on sharding or worker count.
    """
    t0 = time.perf_counter()
    alphabet = Alphabet.of_rank(cfg.rank)
    cache = _SubgroupCache(alphabet)
    saved = _load_checkpoint(cfg.checkpoint, cfg)
    workers = cfg.workers or default_workers()
    results = []
    budget = cfg.max_tuples
    pool = get_context("fork").Pool(min(workers, cfg.shards)) if workers > 1 and cfg.shards > 1 else None
    try:
        for indices in cfg.multisets():
            counts = {d: len(cache[d]) for d in set(indices)}
            total = tuple_count(indices, counts)
            res = MultisetResult(indices, counts, total)
            stop = total
            if budget is not None:
                stop = min(total, budget)
                budget -= stop
            key = ",".join(map(str, indices))
            state = saved.setdefault(key, {str(s): {"next": 0, "found": [], "done": 0} for s in range(cfg.shards)})
            pos = min(st["next"] for st in state.values())
            while pos < stop:
                hi = min(stop, pos + chunk)
                # after a resume some shards may already be past pos
                behind = [s for s in range(cfg.shards) if state[str(s)]["next"] < hi]
                jobs = [(alphabet.names, indices, s, cfg.shards, max(pos, state[str(s)]["next"]), hi)
                        for s in behind]
                outs = pool.map(_run_shard, jobs) if pool else [_run_shard(j) for j in jobs]
                for s, (found, n_done) in zip(behind, outs):
                    st = state[str(s)]
                    st["found"] = sorted({_record_key(r): r for r in st["found"] + found}.values(), key=_record_key)
                    st["done"] += n_done
                    st["next"] = hi
                pos = hi
                _save_checkpoint(cfg.checkpoint, cfg, saved)
            merged = {}
            for st in state.values():
                for rec in st["found"]:
                    merged[_record_key(rec)] = rec
            res.tuples_done = sum(st["done"] for st in state.values())
            res.partitions = [merged[k] for k in sorted(merged)]
            res.counterexamples = [r for r in res.partitions if len(set(r["indices"])) == len(r["indices"])]
            log.info("indices %s: %d/%d tuples, %d partitions, %d counterexamples",
                     indices, res.tuples_done, total, len(res.partitions), len(res.counterexamples))
            results.append(res)
    finally:
        if pool:
            pool.close()
            pool.join()
    return SearchReport(cfg, results, time.perf_counter() - t0)


def partition_corpus(alphabet: Alphabet, max_index: int, max_subgroups: int = 3,
                     min_index: int = 2) -> list[CosetPartition]:
    """Every partition built from cosets of at most ``max_subgroups`` distinct subgroups.

    Subgroups range over all indices in ``min_index..max_index``; results are
    deduplicated and sorted by their canonical key.
    """
    graphs = [g for d in range(min_index, max_index + 1) for g in enumerate_subgroups(alphabet, d)]
    seen = {}
    for size in range(1, max_subgroups + 1):
        for combo in combinations(range(len(graphs)), size):
            chosen = [graphs[i] for i in combo]
            for cover in cover_states(chosen):
                # covers that skip a subgroup were already found for a smaller combination
                if len({i for i, _ in cover}) < size:
                    continue
                p = CosetPartition([Part(chosen[i], f, f"S{combo[i]}") for i, f in cover])
                seen.setdefault(p.key(), p)
    return [seen[k] for k in sorted(seen)]
