"""Partition agreement metrics.

Agreement is judged over unordered variable pairs: a pair is positive in a
partition when both variables sit in the same cluster. Precision and recall
of the produced positives against the reference positives give a score that
does not care about cluster order, cluster count, or labels. Unassigned
variables count as singleton clusters on both sides, so they produce no
positive pairs but still take part in the universe.

Pairwise F1 is the headline number because reference clusterings here are
singleton heavy and the Rand index saturates; Rand is still computed for
completeness. When a side has no positive pairs at all its precision or
recall is 1 by convention (nothing claimed, nothing wrong).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .model import DataError, Partition


@dataclass(frozen=True, slots=True)
class MatchRow:
    """One produced cluster against the reference cluster sharing the most
    members with it. ``reference`` is None when nothing overlaps."""

    produced: frozenset[int]
    reference: frozenset[int] | None
    overlap: int


@dataclass(frozen=True, slots=True)
class AgreementReport:
    produced_pairs: int
    reference_pairs: int
    shared_pairs: int
    pairwise_precision: float
    pairwise_recall: float
    pairwise_f1: float
    rand_index: float
    exact_cluster_matches: int
    per_cluster_table: tuple[MatchRow, ...]


def _cluster_ids(partition: Partition) -> list[int]:
    ids = [-1] * partition.n
    for ci, cluster in enumerate(partition.clusters):
        for v in cluster:
            ids[v] = ci
    return ids


def pairwise_agreement(produced: Partition, reference: Partition) -> AgreementReport:
    """Score a produced partition against a reference over the same
    variable universe."""
    if produced.n != reference.n:
        raise DataError(
            f"partitions cover different universes ({produced.n} vs {reference.n} variables)"
        )
    prod = produced.with_singleton_clusters()
    ref = reference.with_singleton_clusters()
    n = prod.n

    produced_pairs = sum(len(c) * (len(c) - 1) // 2 for c in prod.clusters)
    reference_pairs = sum(len(c) * (len(c) - 1) // 2 for c in ref.clusters)

    pid = _cluster_ids(prod)
    rid = _cluster_ids(ref)
    contingency: dict[tuple[int, int], int] = {}
    for v in range(n):
        key = (pid[v], rid[v])
        contingency[key] = contingency.get(key, 0) + 1
    shared_pairs = sum(c * (c - 1) // 2 for c in contingency.values())

    precision = shared_pairs / produced_pairs if produced_pairs else 1.0
    recall = shared_pairs / reference_pairs if reference_pairs else 1.0
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)

    total_pairs = n * (n - 1) // 2
    if total_pairs:
        agreements = total_pairs - produced_pairs - reference_pairs + 2 * shared_pairs
        rand = agreements / total_pairs
    else:
        rand = 1.0

    exact = len(set(prod.clusters) & set(ref.clusters))

    rows = []
    for cluster in prod.clusters:
        best: frozenset[int] | None = None
        best_overlap = 0
        for candidate in ref.clusters:
            overlap = len(cluster & candidate)
            if overlap > best_overlap:
                best, best_overlap = candidate, overlap
        rows.append(MatchRow(cluster, best, best_overlap))

    return AgreementReport(
        produced_pairs=produced_pairs,
        reference_pairs=reference_pairs,
        shared_pairs=shared_pairs,
        pairwise_precision=precision,
        pairwise_recall=recall,
        pairwise_f1=f1,
        rand_index=rand,
        exact_cluster_matches=exact,
        per_cluster_table=tuple(rows),
    )


def _names(ids: frozenset[int], labels: Sequence[str] | None) -> str:
    if labels is None:
        return "{" + ",".join(str(i) for i in sorted(ids)) + "}"
    return "{" + ",".join(sorted(labels[i] for i in ids)) + "}"


def agreement_text(report: AgreementReport, labels: Sequence[str] | None = None) -> str:
    lines = [
        f"pairs: produced={report.produced_pairs} reference={report.reference_pairs}"
        f" shared={report.shared_pairs}",
        f"pairwise: precision={report.pairwise_precision:.4f}"
        f" recall={report.pairwise_recall:.4f} f1={report.pairwise_f1:.4f}",
        f"rand_index={report.rand_index:.4f} exact_cluster_matches={report.exact_cluster_matches}",
        "best matches:",
    ]
    for row in report.per_cluster_table:
        target = "-" if row.reference is None else _names(row.reference, labels)
        lines.append(f"  {_names(row.produced, labels)} ~ {target} overlap={row.overlap}")
    return "\n".join(lines) + "\n"


def agreement_json(report: AgreementReport, labels: Sequence[str] | None = None) -> dict:
    def names(ids: frozenset[int]) -> list:
        if labels is None:
            return sorted(ids)
        return sorted(labels[i] for i in ids)

    return {
        "produced_pairs": report.produced_pairs,
        "reference_pairs": report.reference_pairs,
        "shared_pairs": report.shared_pairs,
        "pairwise_precision": report.pairwise_precision,
        "pairwise_recall": report.pairwise_recall,
        "pairwise_f1": report.pairwise_f1,
        "rand_index": report.rand_index,
        "exact_cluster_matches": report.exact_cluster_matches,
        "best_matches": [
            {
                "produced": names(row.produced),
                "reference": None if row.reference is None else names(row.reference),
                "overlap": row.overlap,
            }
            for row in report.per_cluster_table
        ],
    }
