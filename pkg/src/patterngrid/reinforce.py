"""Per-variable reinforcement counts and the equal-count bands they induce.

The simplest of the three engines: one counter per variable, incremented
when the variable appears in an event and optionally decremented when it
does not. Grouping variables into bands of equal count is kept as the
comparison baseline; it deliberately ignores any structure inside the
events, which is exactly why its clusters come out wrong on structured
input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import DataError, Event, Partition, Weights, validate_event

Band = tuple[float, frozenset[int]]


@dataclass(slots=True)
class ReinforceState:
    """Per-variable counters over a fixed vocabulary of n ids.

    Counts are additive and mergeable: disjoint event shards may be counted
    independently and summed (valid as long as delta is 0; the absence
    decrement is order sensitive because of the floor at zero). A single
    state is not safe for simultaneous writers; shard, then merge.
    """

    counts: list[int | float]

    @classmethod
    def empty(cls, n: int) -> ReinforceState:
        return cls([0] * n)

    @property
    def n(self) -> int:
        return len(self.counts)


def update(state: ReinforceState, event: Event, weights: Weights = Weights()) -> ReinforceState:
    """Apply one event: members gain omega_i, absentees lose delta, floored at 0."""
    validate_event(event, state.n)
    for v in event.members:
        state.counts[v] += weights.omega_i
    if weights.delta:
        present = event.member_set()
        for w in range(state.n):
            if w not in present:
                state.counts[w] = max(0, state.counts[w] - weights.delta)
    return state


def count_events(state: ReinforceState, events, weights: Weights = Weights()) -> ReinforceState:
    for event in events:
        update(state, event, weights)
    return state


def merge(a: ReinforceState, b: ReinforceState) -> ReinforceState:
    """Sum two shard states counted over the same vocabulary."""
    if a.n != b.n:
        raise DataError(f"cannot merge states over {a.n} and {b.n} variables")
    return ReinforceState([x + y for x, y in zip(a.counts, b.counts)])


def band_clusters(state: ReinforceState) -> list[Band]:
    """Group variables by exact count value, largest count first.

    Band equality is exact, never fuzzy: integral weights keep the counts
    integral, and reproducibility beats tolerance here.
    """
    if state.n == 0:
        return []
    by_value: dict[int | float, set[int]] = {}
    for v, count in enumerate(state.counts):
        by_value.setdefault(count, set()).add(v)
    return [(value, frozenset(by_value[value])) for value in sorted(by_value, reverse=True)]


def bands_to_partition(bands: list[Band], n: int) -> Partition:
    """Multi-member bands become clusters; one-member bands stay unassigned."""
    clusters = []
    unassigned: set[int] = set()
    for _, members in bands:
        if len(members) >= 2:
            clusters.append(members)
        else:
            unassigned |= members
    return Partition(n, tuple(clusters), frozenset(unassigned))
