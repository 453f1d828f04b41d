"""Shared data model: variables, events, datasets, weights, partitions.

Everything downstream (the three counting engines, the hierarchy and the
evaluation code) works on the dense integer ids assigned here. Labels are
kept only on the Dataset so results can be rendered back as text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DataError(ValueError):
    """Invalid input data: bad events, unknown ids, mismatched universes."""


class ConfigError(ValueError):
    """Invalid parameter or option value."""


@dataclass(frozen=True, slots=True)
class Variable:
    """A categorical symbol with a dense id assigned in first-seen order."""

    id: int
    label: str


@dataclass(frozen=True, slots=True)
class Event:
    """One presentation of a set of co-occurring variables.

    Presentation order is kept and the first member is distinguished as the
    source. The counting engines only look at the member set, but keeping
    the order makes ingestion lossless.
    """

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise DataError("event has no members")
        if len(set(self.members)) != len(self.members):
            raise DataError(f"duplicate members in event {self.members!r}")

    @property
    def source(self) -> int:
        return self.members[0]

    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)


def validate_event(event: Event, n: int) -> None:
    """Reject events that mention ids outside the vocabulary 0..n-1."""
    for m in event.members:
        if not 0 <= m < n:
            raise DataError(f"event member id {m} outside vocabulary of size {n}")


@dataclass(frozen=True, slots=True)
class Dataset:
    """An ordered event list over a fixed vocabulary.

    Immutable after construction; safe to share across readers. Rejected
    input rows are reported in ``diagnostics``, never silently repaired.
    """

    variables: tuple[Variable, ...]
    events: tuple[Event, ...]
    diagnostics: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for event in self.events:
            validate_event(event, len(self.variables))

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.variables)

    def id_of(self, label: str) -> int:
        for v in self.variables:
            if v.label == label:
                return v.id
        raise DataError(f"label {label!r} not in the vocabulary")

    def decode(self, event: Event) -> list[str]:
        return [self.variables[i].label for i in event.members]


def build_vocabulary(raw_events: Iterable[Sequence[str]]) -> Dataset:
    """Assign dense ids in first-seen order and re-encode the events.

    An event containing a duplicate token (or no tokens at all) is rejected
    with a diagnostic; its tokens do not enter the vocabulary.
    """
    ids: dict[str, int] = {}
    variables: list[Variable] = []
    events: list[Event] = []
    diagnostics: list[str] = []
    for pos, tokens in enumerate(raw_events):
        tokens = list(tokens)
        if not tokens:
            diagnostics.append(f"event {pos}: no tokens")
            continue
        if len(set(tokens)) != len(tokens):
            diagnostics.append(f"event {pos}: duplicate token in {tokens!r}")
            continue
        members = []
        for tok in tokens:
            if tok not in ids:
                ids[tok] = len(variables)
                variables.append(Variable(len(variables), tok))
            members.append(ids[tok])
        events.append(Event(tuple(members)))
    return Dataset(tuple(variables), tuple(events), tuple(diagnostics))


@dataclass(frozen=True, slots=True)
class Weights:
    """Increment sizes shared by the counting engines.

    ``omega_i`` is added for a present variable, ``omega_g`` for a group
    overlap, and ``delta`` is the optional absence decrement used only by
    the per-variable reinforcement engine.
    """

    omega_i: int | float = 1
    omega_g: int | float = 1
    delta: int | float = 0

    def __post_init__(self) -> None:
        if self.omega_i <= 0:
            raise ConfigError("omega_i must be positive")
        if self.omega_g <= 0:
            raise ConfigError("omega_g must be positive")
        if self.delta < 0:
            raise ConfigError("delta must be non-negative")


@dataclass(frozen=True, slots=True)
class Partition:
    """Disjoint clusters over ids 0..n-1 plus explicitly unassigned ids."""

    n: int
    clusters: tuple[frozenset[int], ...]
    unassigned: frozenset[int]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for cluster in self.clusters:
            if not cluster:
                raise DataError("empty cluster in partition")
            if seen & cluster:
                raise DataError("clusters are not disjoint")
            seen |= cluster
        if seen & self.unassigned:
            raise DataError("unassigned ids overlap a cluster")
        if seen | self.unassigned != set(range(self.n)):
            raise DataError("partition does not cover the vocabulary")

    def label_clusters(self, labels: Sequence[str]) -> list[list[str]]:
        return [sorted(labels[i] for i in cluster) for cluster in self.clusters]

    def label_unassigned(self, labels: Sequence[str]) -> list[str]:
        return sorted(labels[i] for i in self.unassigned)

    def with_singleton_clusters(self) -> Partition:
        """Move every unassigned id into its own one-member cluster."""
        extra = tuple(frozenset({v}) for v in sorted(self.unassigned))
        return Partition(self.n, self.clusters + extra, frozenset())


def partition_from_label_sets(
    labels: Sequence[str], cluster_label_sets: Iterable[Iterable[str]]
) -> Partition:
    """Build a Partition over ``labels`` from clusters given as label sets.

    Labels not mentioned by any cluster fall into ``unassigned``. Unknown
    labels raise DataError (a universe mismatch).
    """
    index = {label: i for i, label in enumerate(labels)}
    if len(index) != len(labels):
        raise DataError("vocabulary labels are not unique")
    clusters = []
    for group in cluster_label_sets:
        members = set()
        for label in group:
            if label not in index:
                raise DataError(f"label {label!r} not in the vocabulary")
            members.add(index[label])
        clusters.append(frozenset(members))
    covered: set[int] = set()
    for cluster in clusters:
        covered |= cluster
    unassigned = frozenset(range(len(labels))) - covered
    return Partition(len(labels), tuple(clusters), unassigned)


@dataclass(frozen=True, slots=True)
class InterPatternLink:
    """A residual cross-cluster co-occurrence, reported rather than merged."""

    a: int
    b: int
    strength: int | float

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise DataError("link endpoints must differ")
        if self.strength <= 0:
            raise DataError("link strength must be positive")
