"""Command line driver tying the engines together.

Subcommands: ``cluster`` runs one engine end to end, ``compare`` scores one
or more engines against a reference clustering, ``tables`` renders the
three worked-example tables from the built-in fixture, and ``hierarchy``
builds and consolidates a pattern hierarchy.

Output determinism is a hard contract: the same command on the same input
produces byte-identical standard output, whatever the shard count. Timing
always goes to standard error; ``--timing`` additionally embeds the
(necessarily unstable) numbers in the payload for whoever asks for them.

Exit codes: 0 success, 1 input error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import functools
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from . import counting, grid, hierarchy, reinforce
from .evaluate import agreement_json, agreement_text, pairwise_agreement
from .ingest import (
    FIXTURES,
    LabelPolicy,
    ReferenceClusters,
    TransactionFormat,
    load_fixture,
    load_reference_path,
    parse_transactions_path,
)
from .model import ConfigError, DataError, Dataset, Partition, Weights

METHODS = ("reinforce", "cm", "grid")


def _number(text: str):
    """Numeric flag values; integers stay integers so rendered counts do
    not grow a spurious decimal point."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _add_input_flags(sub: argparse.ArgumentParser) -> None:
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="path to a transaction file")
    source.add_argument("--fixture", choices=FIXTURES, help="built-in input")
    sub.add_argument(
        "--label-policy",
        choices=[p.value for p in LabelPolicy],
        default=LabelPolicy.RECORD_LABEL.value,
        help="whether an input file's first field is a record label or a member",
    )
    sub.add_argument(
        "--transpose",
        action="store_true",
        help="pivot an input file: record labels become the vocabulary",
    )


def _add_weight_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--omega-i", type=_number, default=1, help="increment per appearance")
    sub.add_argument("--omega-g", type=_number, default=1, help="global increment per overlap")
    sub.add_argument("--delta", type=_number, default=0, help="decrement per absence")


def _add_grid_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--tau-link", type=_number, default=2, help="minimum cross-cluster count to report"
    )
    sub.add_argument(
        "--gap-ties",
        choices=["high", "low"],
        default="high",
        help="on equal gaps, cut toward the larger (high) or smaller (low) counts",
    )


def _add_shard_flag(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--shards",
        type=int,
        default=1,
        help="shard reinforce/grid counting and merge; cm always runs sequentially",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patterngrid",
        description="Count-based clustering of categorical event data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cluster = sub.add_parser("cluster", help="run one engine end to end")
    cluster.add_argument("--method", choices=METHODS, required=True)
    _add_input_flags(cluster)
    cluster.add_argument("--format", choices=["text", "json", "csv"], default="text")
    _add_weight_flags(cluster)
    _add_grid_flags(cluster)
    _add_shard_flag(cluster)
    cluster.add_argument(
        "--singletons",
        choices=["unassigned", "clusters"],
        default="unassigned",
        help="report unclustered variables as unassigned or as one-member clusters",
    )
    cluster.add_argument("--timing", action="store_true", help="embed timing in the output")
    cluster.set_defaults(func=cmd_cluster)

    compare = sub.add_parser("compare", help="score engines against a reference")
    compare.add_argument(
        "--method",
        default="grid,reinforce",
        help="comma-separated subset of reinforce,cm,grid",
    )
    _add_input_flags(compare)
    compare.add_argument(
        "--reference",
        required=True,
        help="fixture name or path to a JSON reference clustering",
    )
    compare.add_argument("--format", choices=["text", "json"], default="text")
    _add_weight_flags(compare)
    _add_grid_flags(compare)
    _add_shard_flag(compare)
    compare.add_argument("--timing", action="store_true", help="embed timing in the output")
    compare.set_defaults(func=cmd_compare)

    tables = sub.add_parser("tables", help="render the worked-example tables")
    tables.set_defaults(func=cmd_tables)

    hier = sub.add_parser("hierarchy", help="build and consolidate a pattern hierarchy")
    _add_input_flags(hier)
    hier.add_argument("--format", choices=["text", "json"], default="text")
    hier.add_argument("--theta-merge", type=float, default=2.0)
    hier.add_argument("--theta-split", type=float, default=2.0)
    hier.add_argument("--theta-new", type=float, default=0.5)
    hier.add_argument("--timing", action="store_true", help="embed timing in the output")
    hier.set_defaults(func=cmd_hierarchy)

    return parser


def _load_dataset(args) -> tuple[Dataset, float, str]:
    started = time.perf_counter()
    if args.fixture:
        loaded = load_fixture(args.fixture)
        if not isinstance(loaded, Dataset):
            raise ConfigError(
                f"fixture {args.fixture!r} is a reference clustering, not an event dataset"
            )
        dataset, source = loaded, args.fixture
    else:
        fmt = TransactionFormat(label_policy=LabelPolicy(args.label_policy))
        dataset = parse_transactions_path(args.input, fmt, transpose=args.transpose)
        source = args.input
    ms = (time.perf_counter() - started) * 1000
    if dataset.diagnostics:
        print(f"diagnostics: {len(dataset.diagnostics)} lines skipped", file=sys.stderr)
    return dataset, ms, source


def _chunks(events: tuple, shards: int) -> list[tuple]:
    size = math.ceil(len(events) / shards)
    return [events[i : i + size] for i in range(0, len(events), size)]


def _count_reinforce(dataset: Dataset, weights: Weights, shards: int) -> reinforce.ReinforceState:
    if shards <= 1:
        return reinforce.count_events(reinforce.ReinforceState.empty(dataset.n), dataset.events, weights)
    if weights.delta:
        raise ConfigError("sharded counting needs delta=0; the absence decrement is order sensitive")
    chunks = _chunks(dataset.events, shards)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        states = list(
            pool.map(
                lambda chunk: reinforce.count_events(
                    reinforce.ReinforceState.empty(dataset.n), chunk, weights
                ),
                chunks,
            )
        )
    return functools.reduce(reinforce.merge, states)


def _count_grid(dataset: Dataset, weights: Weights, shards: int) -> grid.CountMatrix:
    if shards <= 1:
        return grid.count_events(grid.CountMatrix.zeros(dataset.n), dataset.events, weights.omega_i)
    chunks = _chunks(dataset.events, shards)
    with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
        matrices = list(
            pool.map(
                lambda chunk: grid.count_events(
                    grid.CountMatrix.zeros(dataset.n), chunk, weights.omega_i
                ),
                chunks,
            )
        )
    return functools.reduce(grid.grid_merge, matrices)


def _cluster_section(partition: Partition, labels: Sequence[str]) -> list[str]:
    lines = []
    if partition.clusters:
        lines.append("clusters:")
        lines.extend(f"  {','.join(group)}" for group in partition.label_clusters(labels))
    else:
        lines.append("clusters: (none)")
    unassigned = partition.label_unassigned(labels)
    lines.append(f"unassigned: {','.join(unassigned) if unassigned else '(none)'}")
    return lines


def _link_section(links, labels: Sequence[str]) -> list[str]:
    if not links:
        return ["links: (none)"]
    return ["links:"] + [f"  {labels[l.a]}-{labels[l.b]} strength {l.strength}" for l in links]


def _reinforce_text(state: reinforce.ReinforceState, bands, labels) -> list[str]:
    lines = ["counts:"]
    width = max(len(l) for l in labels)
    lines.extend(f"  {labels[v].ljust(width)} {state.counts[v]}" for v in range(state.n))
    lines.append("bands:")
    lines.extend(f"  {value}: {','.join(sorted(labels[v] for v in members))}" for value, members in bands)
    return lines


def _instances_text(store: counting.InstanceStore, labels) -> list[str]:
    names = [",".join(sorted(labels[v] for v in r.pattern)) for r in store.records]
    width = max((len(n) for n in names), default=0)
    lines = ["instances:"]
    for name, record in zip(names, store.records):
        lines.append(
            f"  {name.ljust(width)}  I={record.local_count}  G={record.global_count}"
            f"  coherence={counting.coherence(record)}"
        )
    return lines


def _run_method(method: str, dataset: Dataset, weights: Weights, args):
    """Count and extract with one engine.

    Returns (partition, links, text body lines, detail payload, count ms,
    extract ms)."""
    labels = dataset.labels
    started = time.perf_counter()
    if method == "reinforce":
        state = _count_reinforce(dataset, weights, args.shards)
        counted = time.perf_counter()
        bands = reinforce.band_clusters(state)
        partition = reinforce.bands_to_partition(bands, state.n)
        extracted = time.perf_counter()
        text = _reinforce_text(state, bands, labels)
        detail = {
            "counts": {labels[v]: state.counts[v] for v in range(state.n)},
            "bands": [
                {"count": value, "members": sorted(labels[v] for v in members)}
                for value, members in bands
            ],
        }
        links: tuple = ()
    elif method == "cm":
        store = counting.present_all(counting.InstanceStore.empty(dataset.n), dataset.events, weights)
        counted = time.perf_counter()
        partition = counting.select_clusters(store)
        extracted = time.perf_counter()
        text = _instances_text(store, labels)
        detail = {
            "instances": [
                {
                    "pattern": sorted(labels[v] for v in r.pattern),
                    "local": r.local_count,
                    "global": r.global_count,
                    "coherence": counting.coherence(r),
                }
                for r in store.records
            ]
        }
        links = ()
    elif method == "grid":
        matrix = _count_grid(dataset, weights, args.shards)
        counted = time.perf_counter()
        result = grid.extract_clusters(matrix, args.tau_link, ties=args.gap_ties)
        extracted = time.perf_counter()
        partition, links = result.partition, result.links
        text = grid.matrix_text(matrix, labels).splitlines()
        detail = {"matrix": grid.matrix_json(matrix, labels)}
    else:
        raise ConfigError(f"unknown method {method!r}")
    return partition, links, text, detail, (counted - started) * 1000, (extracted - counted) * 1000


def _links_json(links, labels) -> list[dict]:
    return [{"a": labels[l.a], "b": labels[l.b], "strength": l.strength} for l in links]


def _parameters(args, source: str) -> dict:
    """Result-shaping parameters only: the shard count is deliberately not
    echoed, because counting shards then merging must not change a single
    output byte."""
    params = {"source": source}
    for name in (
        "label_policy",
        "transpose",
        "omega_i",
        "omega_g",
        "delta",
        "tau_link",
        "gap_ties",
        "singletons",
        "theta_merge",
        "theta_split",
        "theta_new",
        "reference",
    ):
        if hasattr(args, name):
            params[name] = getattr(args, name)
    return params


def _counts_csv(detail: dict) -> list[str]:
    return ["variable,count"] + [f"{label},{count}" for label, count in detail["counts"].items()]


def _matrix_csv(detail: dict) -> list[str]:
    payload = detail["matrix"]
    labels, cells = payload["labels"], payload["cells"]
    rows = ["," + ",".join(labels)]
    for i, label in enumerate(labels):
        rows.append(
            label + "," + ",".join("x" if i == j else str(cells[i][j]) for j in range(len(labels)))
        )
    return rows


def _instances_csv(detail: dict) -> list[str]:
    rows = ["pattern,local,global,coherence"]
    for inst in detail["instances"]:
        rows.append(f"{';'.join(inst['pattern'])},{inst['local']},{inst['global']},{inst['coherence']}")
    return rows


def _assignment_csv(partition: Partition, labels) -> list[str]:
    cluster_of: dict[int, int] = {}
    for ci, cluster in enumerate(partition.clusters):
        for v in cluster:
            cluster_of[v] = ci
    rows = ["variable,cluster"]
    for v in range(partition.n):
        rows.append(f"{labels[v]},{cluster_of[v] if v in cluster_of else ''}")
    return rows


def cmd_cluster(args) -> int:
    weights = Weights(args.omega_i, args.omega_g, args.delta)
    dataset, parse_ms, source = _load_dataset(args)
    labels = dataset.labels
    partition, links, text, detail, count_ms, extract_ms = _run_method(
        args.method, dataset, weights, args
    )
    if args.singletons == "clusters":
        partition = partition.with_singleton_clusters()

    timing = {"parse": parse_ms, "count": count_ms, "extract": extract_ms}
    print(
        f"timing: parse={parse_ms:.1f}ms count={count_ms:.1f}ms extract={extract_ms:.1f}ms",
        file=sys.stderr,
    )

    if args.format == "json":
        payload = {
            "method": args.method,
            "parameters": _parameters(args, source),
            "clusters": partition.label_clusters(labels),
            "unassigned": partition.label_unassigned(labels),
            "links": _links_json(links, labels),
            "detail": detail,
        }
        if args.timing:
            payload["timing_ms"] = timing
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        if args.method == "reinforce":
            sections = [_counts_csv(detail)]
        elif args.method == "cm":
            sections = [_instances_csv(detail)]
        else:
            sections = [_matrix_csv(detail)]
        sections.append(_assignment_csv(partition, labels))
        if args.method == "grid":
            sections.append(
                ["a,b,strength"] + [f"{labels[l.a]},{labels[l.b]},{l.strength}" for l in links]
            )
        print("\n\n".join("\n".join(s) for s in sections))
    else:
        lines = [f"method: {args.method}", f"variables: {dataset.n}", f"events: {len(dataset.events)}"]
        lines += text
        lines += _cluster_section(partition, labels)
        lines += _link_section(links, labels)
        if args.timing:
            lines.append(
                f"timing: parse={parse_ms:.1f}ms count={count_ms:.1f}ms extract={extract_ms:.1f}ms"
            )
        print("\n".join(lines))
    return 0


def _load_reference(ref: str) -> ReferenceClusters:
    if ref == "plants_reference":
        loaded = load_fixture(ref)
        assert isinstance(loaded, ReferenceClusters)
        return loaded
    if ref in FIXTURES:
        raise ConfigError(f"fixture {ref!r} is an event dataset, not a reference clustering")
    return load_reference_path(ref)


def cmd_compare(args) -> int:
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}")
    if not methods:
        raise ConfigError("no methods requested")
    weights = Weights(args.omega_i, args.omega_g, args.delta)
    dataset, parse_ms, source = _load_dataset(args)
    labels = dataset.labels
    reference = _load_reference(args.reference)
    reference_partition = reference.align(labels)

    print(f"timing: parse={parse_ms:.1f}ms", file=sys.stderr)
    reports = {}
    timing: dict = {"parse": parse_ms}
    for method in methods:
        partition, _, _, _, count_ms, extract_ms = _run_method(method, dataset, weights, args)
        reports[method] = pairwise_agreement(partition, reference_partition)
        timing[method] = {"count": count_ms, "extract": extract_ms}
        print(f"timing[{method}]: count={count_ms:.1f}ms extract={extract_ms:.1f}ms", file=sys.stderr)

    if args.format == "json":
        payload = {
            "reference": args.reference,
            "parameters": _parameters(args, source),
            "methods": methods,
            "reports": {m: agreement_json(reports[m], labels) for m in methods},
        }
        if args.timing:
            payload["timing_ms"] = timing
        print(json.dumps(payload, indent=2))
    else:
        lines = [f"reference: {args.reference} ({len(reference.cluster_label_sets)} clusters)"]
        for method in methods:
            lines.append(f"method: {method}")
            lines.extend("  " + row for row in agreement_text(reports[method], labels).splitlines())
        print("\n".join(lines))
    return 0


def cmd_tables(args) -> int:
    dataset = load_fixture("seven_event")
    assert isinstance(dataset, Dataset)
    labels = dataset.labels
    weights = Weights()

    state = reinforce.count_events(reinforce.ReinforceState.empty(dataset.n), dataset.events)
    bands = reinforce.band_clusters(state)

    store = counting.present_all(counting.InstanceStore.empty(dataset.n), dataset.events, weights)
    selected = counting.select_clusters(store)

    matrix = grid.count_events(grid.CountMatrix.zeros(dataset.n), dataset.events)
    extracted = grid.extract_clusters(matrix, 2)

    lines = ["== variable counts =="]
    lines += _reinforce_text(state, bands, labels)
    lines.append("")
    lines.append("== unique instances ==")
    lines += _instances_text(store, labels)
    lines.append("selected:")
    lines.extend(f"  {','.join(group)}" for group in selected.label_clusters(labels))
    lines.append("")
    lines.append("== co-occurrence grid ==")
    lines += grid.matrix_text(matrix, labels).splitlines()
    lines += _cluster_section(extracted.partition, labels)
    lines += _link_section(extracted.links, labels)
    print("\n".join(lines))
    return 0


def cmd_hierarchy(args) -> int:
    dataset, parse_ms, source = _load_dataset(args)
    labels = dataset.labels
    store = hierarchy.HierarchyStore(
        theta_merge=args.theta_merge, theta_split=args.theta_split, theta_new=args.theta_new
    )
    started = time.perf_counter()
    hierarchy.present_all(store, dataset.events)
    presented = time.perf_counter()
    hierarchy.consolidate(store)
    consolidated = time.perf_counter()
    present_ms = (presented - started) * 1000
    consolidate_ms = (consolidated - presented) * 1000
    print(
        f"timing: parse={parse_ms:.1f}ms present={present_ms:.1f}ms"
        f" consolidate={consolidate_ms:.1f}ms",
        file=sys.stderr,
    )

    if args.format == "json":
        payload = {
            "method": "hierarchy",
            "parameters": _parameters(args, source),
            "mass": hierarchy.total_mass(store),
            **hierarchy.tree_json(store, labels),
        }
        if args.timing:
            payload["timing_ms"] = {
                "parse": parse_ms,
                "present": present_ms,
                "consolidate": consolidate_ms,
            }
        print(json.dumps(payload, indent=2))
    else:
        lines = [
            f"presentations: {store.presentations}",
            f"mass: {hierarchy.total_mass(store)}",
        ]
        lines += hierarchy.tree_text(store, labels).splitlines()
        print("\n".join(lines))
    return 0


def entry(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(entry())
