"""Incremental pattern hierarchy with merge and split maintenance.

Patterns are stored as nodes holding the full variable set and a count of
exact presentations. An event that extends a stored pattern does not grow
the pattern in place; it hangs a linked child node off it, the link naming
the added variables. An event that only partially covers a pattern is
recorded as bookkeeping on the best-overlapping node, and an event too far
from everything starts a fresh root.

Maintenance is explicit rather than continuous: ``consolidate`` applies the
merge rule (an extension presented often enough relative to its parent
becomes the whole pattern and the link disappears) and the split rule (a
sub-pattern presented often enough relative to the full pattern becomes its
own node, the remainder demoted to an extension of it) until neither fires.
Every presentation contributes exactly one unit of occurrence mass and both
rules conserve it, so the tree can always be audited against the number of
presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .model import ConfigError, Event


@dataclass(slots=True)
class Extension:
    """Link from a pattern node to the child that extends it.

    The child's full pattern is always parent pattern | adds; the child's
    occurrence count is the link's count.
    """

    adds: frozenset[int]
    node: PatternNode


@dataclass(slots=True)
class PatternNode:
    pattern: frozenset[int]
    occurrences: int = 0
    extensions: list[Extension] = field(default_factory=list)
    # Partial presentations recorded against this node, keyed by the part
    # of the event that fell inside the pattern. Only presented subsets are
    # tracked, never the full powerset.
    subset_counts: dict[frozenset[int], int] = field(default_factory=dict)


@dataclass(slots=True)
class HierarchyStore:
    """Forest of pattern nodes plus the maintenance thresholds.

    theta_merge and theta_split are dominance ratios (how much more often
    the extension or subset must appear than its host) and must exceed 1;
    theta_new is the minimum overlap fraction an event must share with some
    stored pattern to avoid spawning a new root.
    """

    roots: list[PatternNode] = field(default_factory=list)
    theta_merge: float = 2.0
    theta_split: float = 2.0
    theta_new: float = 0.5
    presentations: int = 0

    def __post_init__(self) -> None:
        if not self.theta_merge > 1:
            raise ConfigError("theta_merge must be greater than 1")
        if not self.theta_split > 1:
            raise ConfigError("theta_split must be greater than 1")
        if not 0 < self.theta_new <= 1:
            raise ConfigError("theta_new must be in (0, 1]")


def walk(store: HierarchyStore) -> Iterator[PatternNode]:
    """All nodes, depth first, roots in creation order. This is the tie
    order everywhere a best node is chosen."""
    stack = list(reversed(store.roots))
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed([e.node for e in node.extensions]))


def present_pattern(store: HierarchyStore, event: Event) -> HierarchyStore:
    """Record one presentation.

    Priority order: exact match on a stored pattern, extension of the most
    specific stored pattern the event covers, partial-overlap bookkeeping
    on the best-overlapping node when the fraction reaches theta_new, and
    finally a brand-new root.
    """
    members = event.member_set()
    store.presentations += 1
    nodes = list(walk(store))

    covered = [n for n in nodes if n.pattern <= members]
    if covered:
        best = max(covered, key=lambda n: len(n.pattern))
        if best.pattern == members:
            best.occurrences += 1
            return store
        adds = frozenset(members - best.pattern)
        for ext in best.extensions:
            if ext.adds == adds:
                ext.node.occurrences += 1
                return store
        best.extensions.append(Extension(adds, PatternNode(members, 1)))
        return store

    if nodes:
        best = max(nodes, key=lambda n: len(n.pattern & members) / len(members))
        fraction = len(best.pattern & members) / len(members)
        if fraction >= store.theta_new:
            key = frozenset(best.pattern & members)
            best.subset_counts[key] = best.subset_counts.get(key, 0) + 1
            return store

    store.roots.append(PatternNode(frozenset(members), 1))
    return store


def present_all(store: HierarchyStore, events) -> HierarchyStore:
    for event in events:
        present_pattern(store, event)
    return store


def total_mass(store: HierarchyStore) -> int:
    """Occurrence mass over the whole forest; always equals the number of
    presentations."""
    mass = 0
    for node in walk(store):
        mass += node.occurrences + sum(node.subset_counts.values())
    return mass


def _find_merge(store: HierarchyStore) -> tuple[PatternNode, Extension] | None:
    for node in walk(store):
        for ext in node.extensions:
            if ext.node.occurrences >= store.theta_merge * node.occurrences:
                return node, ext
    return None


def _find_split(store: HierarchyStore) -> tuple[PatternNode | None, PatternNode, frozenset[int]] | None:
    parents: dict[int, PatternNode] = {}
    for node in walk(store):
        for ext in node.extensions:
            parents[id(ext.node)] = node
    for node in walk(store):
        for subset in sorted(node.subset_counts, key=sorted):
            if node.subset_counts[subset] >= store.theta_split * node.occurrences:
                return parents.get(id(node)), node, subset
    return None


def _merge(store: HierarchyStore, parent: PatternNode, ext: Extension) -> None:
    """The extension becomes the whole pattern and the link is removed.

    Other extensions of the parent are about the pattern as it was, not
    the grown one, so rewriting them in place would falsify what was seen;
    they are detached and continue as roots.
    """
    child = ext.node
    for other in parent.extensions:
        if other is not ext:
            store.roots.append(other.node)
    parent.pattern = child.pattern
    parent.occurrences += child.occurrences
    parent.extensions = child.extensions
    for subset, count in child.subset_counts.items():
        parent.subset_counts[subset] = parent.subset_counts.get(subset, 0) + count


def _split(
    store: HierarchyStore,
    grand: PatternNode | None,
    node: PatternNode,
    subset: frozenset[int],
) -> None:
    """The dominant subset becomes its own node; the full pattern stays as
    an extension of it, keeping its own count and children."""
    count = node.subset_counts.pop(subset)
    head = PatternNode(subset, count, [Extension(frozenset(node.pattern - subset), node)])
    if grand is None:
        store.roots[store.roots.index(node)] = head
    elif grand.pattern < subset:
        for ext in grand.extensions:
            if ext.node is node:
                ext.adds = frozenset(subset - grand.pattern)
                ext.node = head
                break
    else:
        # The subset does not extend the old parent, so the promoted node
        # cannot hang where the old one did.
        grand.extensions = [e for e in grand.extensions if e.node is not node]
        store.roots.append(head)


def consolidate(store: HierarchyStore) -> HierarchyStore:
    """Run merge and split to a fixed point.

    Each pass applies the first candidate in walk order and rescans, so the
    result is order deterministic. Terminates because a split always retires
    one tracked subset entry and a merge always retires one node while
    creating no subset entries.
    """
    while True:
        merge = _find_merge(store)
        if merge is not None:
            _merge(store, *merge)
            continue
        split = _find_split(store)
        if split is not None:
            _split(store, *split)
            continue
        return store


def tree_text(store: HierarchyStore, labels: Sequence[str] | None = None) -> str:
    """Indented text rendering, one node per line."""

    def name(ids: frozenset[int]) -> str:
        if labels is None:
            return "{" + ",".join(str(i) for i in sorted(ids)) + "}"
        return "{" + ",".join(labels[i] for i in sorted(ids)) + "}"

    lines: list[str] = []

    def emit(node: PatternNode, depth: int) -> None:
        lines.append(f"{'  ' * depth}{name(node.pattern)} x{node.occurrences}")
        for subset in sorted(node.subset_counts, key=sorted):
            lines.append(
                f"{'  ' * (depth + 1)}part {name(subset)} x{node.subset_counts[subset]}"
            )
        for ext in node.extensions:
            lines.append(f"{'  ' * (depth + 1)}+{name(ext.adds)} ->")
            emit(ext.node, depth + 2)

    for root in store.roots:
        emit(root, 0)
    return "\n".join(lines) + "\n"


def tree_json(store: HierarchyStore, labels: Sequence[str] | None = None) -> dict:
    """JSON-ready rendering of the forest."""

    def name(ids: frozenset[int]) -> list:
        if labels is None:
            return sorted(ids)
        return [labels[i] for i in sorted(ids)]

    def node_dict(node: PatternNode) -> dict:
        return {
            "pattern": name(node.pattern),
            "occurrences": node.occurrences,
            "parts": [
                {"members": name(s), "count": node.subset_counts[s]}
                for s in sorted(node.subset_counts, key=sorted)
            ],
            "extensions": [
                {"adds": name(e.adds), "node": node_dict(e.node)} for e in node.extensions
            ],
        }

    return {"roots": [node_dict(r) for r in store.roots], "presentations": store.presentations}
