"""Transaction-file parsing and built-in fixtures.

The transaction format is one record per line, fields separated by a single
delimiter character. Depending on the label policy the first field is either
a record label (the species name in the plants file, dropped from
membership) or an ordinary member. Malformed lines are collected as
diagnostics and skipped, never silently repaired; only a file with zero
parseable records is fatal.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import BinaryIO

from .model import (
    ConfigError,
    DataError,
    Dataset,
    Partition,
    build_vocabulary,
    partition_from_label_sets,
)


class IngestError(DataError):
    """A source that yields no usable records at all."""


class LabelPolicy(Enum):
    # first field names the record and is not a member
    RECORD_LABEL = "record-label"
    # every field is a member
    MEMBERS = "members"


@dataclass(frozen=True, slots=True)
class TransactionFormat:
    """How to cut lines into tokens and what the first token means.

    Decoding is tolerant by default because species names in the plants
    file carry non-ASCII bytes; member tokens are plain ASCII either way.
    """

    delimiter: str = ","
    label_policy: LabelPolicy = LabelPolicy.RECORD_LABEL
    encoding: str = "utf-8"
    errors: str = "replace"

    def __post_init__(self) -> None:
        if len(self.delimiter) != 1:
            raise ConfigError(f"delimiter must be one character, got {self.delimiter!r}")


def parse_transactions(
    source: BinaryIO, fmt: TransactionFormat = TransactionFormat(), *, transpose: bool = False
) -> Dataset:
    """Parse a byte stream of transaction lines into a Dataset.

    With ``transpose`` the file is flipped before encoding: record labels
    become the vocabulary and each member token becomes one event listing
    the records it appeared in (cluster species by state instead of states
    by species). Requires the record-label policy.
    """
    if transpose and fmt.label_policy is not LabelPolicy.RECORD_LABEL:
        raise ConfigError("transpose needs a record label to pivot on")

    text = source.read().decode(fmt.encoding, fmt.errors)
    diagnostics: list[str] = []
    rows: list[tuple[str | None, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        tokens = [t.strip() for t in line.split(fmt.delimiter)]
        if any(not t for t in tokens):
            diagnostics.append(f"line {lineno}: empty field")
            continue
        if fmt.label_policy is LabelPolicy.RECORD_LABEL:
            label, members = tokens[0], tokens[1:]
        else:
            label, members = None, tokens
        if not members:
            diagnostics.append(f"line {lineno}: no members")
            continue
        if len(set(members)) != len(members):
            diagnostics.append(f"line {lineno}: duplicate member")
            continue
        rows.append((label, members))

    if transpose:
        by_member: dict[str, list[str]] = {}
        for label, members in rows:
            assert label is not None
            for m in members:
                group = by_member.setdefault(m, [])
                if label not in group:
                    group.append(label)
        raw = list(by_member.values())
    else:
        raw = [members for _, members in rows]

    if not raw:
        raise IngestError("no parseable records in the source")
    dataset = build_vocabulary(raw)
    return Dataset(dataset.variables, dataset.events, tuple(diagnostics) + dataset.diagnostics)


def parse_transactions_path(
    path: str, fmt: TransactionFormat = TransactionFormat(), *, transpose: bool = False
) -> Dataset:
    with open(path, "rb") as source:
        return parse_transactions(source, fmt, transpose=transpose)


def serialize_transactions(dataset: Dataset, fmt: TransactionFormat = TransactionFormat()) -> str:
    """Render events back to transaction lines.

    Original record labels are not retained by parsing, so under the
    record-label policy a synthetic ``r<position>`` label is emitted; the
    round trip through parse_transactions still restores the same
    vocabulary and events.
    """
    lines = []
    for pos, event in enumerate(dataset.events):
        tokens = dataset.decode(event)
        if fmt.label_policy is LabelPolicy.RECORD_LABEL:
            tokens = [f"r{pos}"] + tokens
        lines.append(fmt.delimiter.join(tokens))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class ReferenceClusters:
    """A published reference clustering, kept as label sets so it can be
    re-indexed against whatever vocabulary a run produced."""

    labels: tuple[str, ...]
    cluster_label_sets: tuple[tuple[str, ...], ...]

    @property
    def partition(self) -> Partition:
        return partition_from_label_sets(self.labels, self.cluster_label_sets)

    def align(self, labels) -> Partition:
        """The reference as a Partition over someone else's vocabulary."""
        return partition_from_label_sets(labels, self.cluster_label_sets)


FIXTURES = ("seven_event", "plants_reference")


def _data_bytes(name: str) -> bytes:
    return resources.files("patterngrid.data").joinpath(name).read_bytes()


def reference_from_clusters(cluster_label_sets) -> ReferenceClusters:
    """Build a ReferenceClusters whose universe is exactly the labels the
    clusters mention, in first-mention order."""
    clusters = tuple(tuple(c) for c in cluster_label_sets)
    seen: list[str] = []
    for cluster in clusters:
        if not cluster:
            raise DataError("reference contains an empty cluster")
        for label in cluster:
            if label in seen:
                raise DataError(f"label {label!r} appears in two reference clusters")
            seen.append(label)
    if not clusters:
        raise DataError("reference contains no clusters")
    return ReferenceClusters(tuple(seen), clusters)


def load_reference_path(path: str) -> ReferenceClusters:
    """Read a reference clustering from a JSON file shaped like
    {"clusters": [["label", ...], ...]}."""
    with open(path, "rb") as source:
        payload = json.loads(source.read().decode("utf-8"))
    if not isinstance(payload, dict) or "clusters" not in payload:
        raise DataError(f"{path}: expected a JSON object with a 'clusters' key")
    return reference_from_clusters(payload["clusters"])


def load_fixture(name: str) -> Dataset | ReferenceClusters:
    """Built-in inputs: ``seven_event`` is the worked seven-line example as
    a Dataset; ``plants_reference`` is the published 31-cluster plants
    reference as ReferenceClusters."""
    if name == "seven_event":
        raw = _data_bytes("seven_event.txt")
        fmt = TransactionFormat(label_policy=LabelPolicy.MEMBERS)
        return parse_transactions(io.BytesIO(raw), fmt)
    if name == "plants_reference":
        payload = json.loads(_data_bytes("plants_reference.json"))
        return reference_from_clusters(payload["clusters"])
    raise DataError(f"unknown fixture {name!r}; have {', '.join(FIXTURES)}")
