"""Knuth's Algorithm X on dict-of-sets, with optional secondary items.

Primary items must be covered exactly once, secondary items at most once.
Candidate order is deterministic: the primary item with fewest candidates
is branched on first (ties by item order), its rows tried in row order.
"""

from __future__ import annotations

from typing import Hashable, Iterator, Sequence


def exact_covers(rows: Sequence[Sequence[Hashable]], primary: Sequence[Hashable],
                 secondary: Sequence[Hashable] = ()) -> Iterator[list[int]]:
    """Yield every set of row indices covering each primary item exactly once."""
    order = {x: k for k, x in enumerate(list(primary) + list(secondary))}
    cols: dict = {x: set() for x in order}
    for r, items in enumerate(rows):
        for x in items:
            if x not in cols:
                raise KeyError(f"row {r} uses unknown item {x!r}")
            cols[x].add(r)
    primary_set = set(primary)
    chosen: list[int] = []

    def select(r):
        removed = []
        for x in rows[r]:
            for other in cols[x]:
                for y in rows[other]:
                    if y != x:
                        cols[y].discard(other)
            removed.append(cols.pop(x))
        return removed

    def deselect(r, removed):
        for x in reversed(rows[r]):
            cols[x] = removed.pop()
            for other in cols[x]:
                for y in rows[other]:
                    if y != x:
                        cols[y].add(other)

    def solve():
        live = [x for x in cols if x in primary_set]
        if not live:
            yield sorted(chosen)
            return
        best = min(live, key=lambda x: (len(cols[x]), order[x]))
        for r in sorted(cols[best]):
            chosen.append(r)
            removed = select(r)
            yield from solve()
            deselect(r, removed)
            chosen.pop()

    yield from solve()
