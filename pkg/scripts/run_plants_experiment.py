#!/usr/bin/env python3
"""Cluster a plants-style transaction corpus with all three engines and
score each against the published 31-cluster regional reference.

Without --input a synthetic corpus is generated in memory. With the real
transaction file downloaded separately, pass its path; the record labels
(species names) are dropped and the region codes clustered.
"""

import argparse
import io
import time

from patterngrid import counting, grid, reinforce
from patterngrid.evaluate import pairwise_agreement
from patterngrid.ingest import load_fixture, parse_transactions
from patterngrid.model import Weights
from patterngrid.synth import DEFAULT_RECORDS, DEFAULT_SEED, synthetic_plants_text


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input", help="transaction file; default: synthetic corpus")
    parser.add_argument("--records", type=int, default=DEFAULT_RECORDS, help="synthetic size")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="synthetic seed")
    parser.add_argument("--tau-link", type=int, default=2)
    args = parser.parse_args()

    started = time.perf_counter()
    if args.input:
        with open(args.input, "rb") as fh:
            dataset = parse_transactions(fh)
        source = args.input
    else:
        raw = synthetic_plants_text(args.records, args.seed).encode()
        dataset = parse_transactions(io.BytesIO(raw))
        source = f"synthetic({args.records}, seed={args.seed})"
    parse_s = time.perf_counter() - started
    print(f"source: {source}")
    print(f"parsed {len(dataset.events)} events over {dataset.n} variables in {parse_s:.2f}s")
    if dataset.diagnostics:
        print(f"skipped {len(dataset.diagnostics)} malformed lines")

    reference = load_fixture("plants_reference")
    reference_partition = reference.align(dataset.labels)

    results = {}

    t0 = time.perf_counter()
    matrix = grid.count_events(grid.CountMatrix.zeros(dataset.n), dataset.events)
    extracted = grid.extract_clusters(matrix, args.tau_link)
    results["grid"] = (extracted.partition, time.perf_counter() - t0)
    print(f"grid: {len(extracted.partition.clusters)} clusters,"
          f" {len(extracted.links)} residual links")

    t0 = time.perf_counter()
    state = reinforce.count_events(reinforce.ReinforceState.empty(dataset.n), dataset.events)
    bands = reinforce.band_clusters(state)
    results["reinforce"] = (
        reinforce.bands_to_partition(bands, state.n),
        time.perf_counter() - t0,
    )
    print(f"reinforce: {len(bands)} count bands")

    t0 = time.perf_counter()
    store = counting.present_all(counting.InstanceStore.empty(dataset.n), dataset.events, Weights())
    results["cm"] = (counting.select_clusters(store), time.perf_counter() - t0)
    print(f"cm: {len(store.records)} unique instances stored")

    print()
    print(f"{'method':<10} {'clusters':>8} {'f1':>8} {'precision':>10} {'recall':>8} {'time':>8}")
    for method, (partition, seconds) in results.items():
        report = pairwise_agreement(partition, reference_partition)
        print(
            f"{method:<10} {len(partition.clusters):>8}"
            f" {report.pairwise_f1:>8.4f} {report.pairwise_precision:>10.4f}"
            f" {report.pairwise_recall:>8.4f} {seconds:>7.2f}s"
        )


if __name__ == "__main__":
    main()
