import random

import pytest

from patterngrid.evaluate import (
    AgreementReport,
    MatchRow,
    agreement_json,
    agreement_text,
    pairwise_agreement,
)
from patterngrid.model import DataError, Partition

A, B, C, D, E, F, G = range(7)


def _partition(n: int, *clusters) -> Partition:
    cs = tuple(frozenset(c) for c in clusters)
    covered = frozenset().union(*cs) if cs else frozenset()
    return Partition(n, cs, frozenset(range(n)) - covered)


def _random_partition(rng: random.Random, n: int) -> Partition:
    ids = [int(rng.random() * 3) for _ in range(n)]
    groups: dict[int, set[int]] = {}
    for v, g in enumerate(ids):
        groups.setdefault(g, set()).add(v)
    return _partition(n, *groups.values())


class TestPairwise:
    def test_identity_is_perfect(self):
        p = _partition(7, {A, B, C, D}, {E, F, G})
        report = pairwise_agreement(p, p)
        assert (report.produced_pairs, report.reference_pairs, report.shared_pairs) == (9, 9, 9)
        assert report.pairwise_precision == 1.0
        assert report.pairwise_recall == 1.0
        assert report.pairwise_f1 == 1.0
        assert report.rand_index == 1.0
        assert report.exact_cluster_matches == 2

    def test_hand_worked_overlap(self):
        produced = _partition(7, {A, B, C, D}, {E, F, G})
        reference = _partition(7, {A, B, C, D, E}, {F, G})
        report = pairwise_agreement(produced, reference)
        assert (report.produced_pairs, report.reference_pairs, report.shared_pairs) == (9, 11, 7)
        assert report.pairwise_precision == pytest.approx(7 / 9)
        assert report.pairwise_recall == pytest.approx(7 / 11)
        assert report.pairwise_f1 == pytest.approx(0.7)
        assert report.rand_index == pytest.approx(15 / 21)
        assert report.exact_cluster_matches == 0

    def test_all_unassigned_claims_nothing(self):
        produced = _partition(4)
        reference = _partition(4, {0, 1, 2, 3})
        report = pairwise_agreement(produced, reference)
        assert report.produced_pairs == 0
        assert report.pairwise_precision == 1.0
        assert report.pairwise_recall == 0.0
        assert report.pairwise_f1 == 0.0

    def test_empty_universe(self):
        report = pairwise_agreement(_partition(0), _partition(0))
        assert report.pairwise_f1 == 1.0
        assert report.rand_index == 1.0

    def test_universe_mismatch(self):
        with pytest.raises(DataError):
            pairwise_agreement(_partition(3, {0, 1}), _partition(4, {0, 1}))

    def test_swap_exchanges_precision_and_recall(self):
        for seed in range(20):
            rng = random.Random(seed)
            a = _random_partition(rng, 9)
            b = _random_partition(rng, 9)
            ab = pairwise_agreement(a, b)
            ba = pairwise_agreement(b, a)
            assert ab.shared_pairs == ba.shared_pairs
            assert ab.pairwise_precision == ba.pairwise_recall
            assert ab.pairwise_recall == ba.pairwise_precision
            assert ab.pairwise_f1 == ba.pairwise_f1
            assert ab.rand_index == ba.rand_index

    def test_relabelling_variables_does_not_change_scores(self):
        produced = _partition(7, {A, B, C, D}, {E, F, G})
        reference = _partition(7, {A, B, C, D, E}, {F, G})
        before = pairwise_agreement(produced, reference)
        perm = [3, 6, 0, 4, 1, 5, 2]

        def relabel(p: Partition) -> Partition:
            return _partition(p.n, *({perm[v] for v in c} for c in p.clusters))

        after = pairwise_agreement(relabel(produced), relabel(reference))
        assert after.pairwise_f1 == before.pairwise_f1
        assert after.rand_index == before.rand_index
        assert after.shared_pairs == before.shared_pairs

    def test_cluster_order_does_not_change_scores(self):
        produced = _partition(7, {E, F, G}, {A, B, C, D})
        reference = _partition(7, {A, B, C, D, E}, {F, G})
        report = pairwise_agreement(produced, reference)
        assert report.pairwise_f1 == pytest.approx(0.7)

    def test_scores_stay_in_bounds(self):
        for seed in range(30):
            rng = random.Random(seed)
            a = _random_partition(rng, 11)
            b = _random_partition(rng, 11)
            report = pairwise_agreement(a, b)
            for value in (
                report.pairwise_precision,
                report.pairwise_recall,
                report.pairwise_f1,
                report.rand_index,
            ):
                assert 0.0 <= value <= 1.0
            assert report.shared_pairs <= min(report.produced_pairs, report.reference_pairs)


class TestMatchTable:
    def test_best_match_per_produced_cluster(self):
        produced = _partition(7, {A, B, C, D}, {E, F, G})
        reference = _partition(7, {A, B, C, D, E}, {F, G})
        rows = pairwise_agreement(produced, reference).per_cluster_table
        assert rows[0] == MatchRow(frozenset({A, B, C, D}), frozenset({A, B, C, D, E}), 4)
        assert rows[1] == MatchRow(frozenset({E, F, G}), frozenset({F, G}), 2)

    def test_unassigned_variables_appear_as_singleton_rows(self):
        produced = _partition(3, {0, 1})
        reference = _partition(3, {0, 1, 2})
        rows = pairwise_agreement(produced, reference).per_cluster_table
        assert rows == (
            MatchRow(frozenset({0, 1}), frozenset({0, 1, 2}), 2),
            MatchRow(frozenset({2}), frozenset({0, 1, 2}), 1),
        )


class TestRendering:
    REPORT = AgreementReport(
        produced_pairs=9,
        reference_pairs=11,
        shared_pairs=7,
        pairwise_precision=7 / 9,
        pairwise_recall=7 / 11,
        pairwise_f1=0.7,
        rand_index=15 / 21,
        exact_cluster_matches=0,
        per_cluster_table=(
            MatchRow(frozenset({0, 1}), frozenset({0, 1, 2}), 2),
            MatchRow(frozenset({3}), None, 0),
        ),
    )

    def test_text(self):
        text = agreement_text(self.REPORT, "ABCD")
        assert text == (
            "pairs: produced=9 reference=11 shared=7\n"
            "pairwise: precision=0.7778 recall=0.6364 f1=0.7000\n"
            "rand_index=0.7143 exact_cluster_matches=0\n"
            "best matches:\n"
            "  {A,B} ~ {A,B,C} overlap=2\n"
            "  {D} ~ - overlap=0\n"
        )

    def test_json(self):
        payload = agreement_json(self.REPORT, "ABCD")
        assert payload["pairwise_f1"] == 0.7
        assert payload["best_matches"][0] == {
            "produced": ["A", "B"],
            "reference": ["A", "B", "C"],
            "overlap": 2,
        }
        assert payload["best_matches"][1]["reference"] is None

    def test_json_without_labels_uses_ids(self):
        payload = agreement_json(self.REPORT)
        assert payload["best_matches"][0]["produced"] == [0, 1]
