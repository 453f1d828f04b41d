"""Deterministic stand-in for the plants transaction file.

The real file (one species per line, then the region codes it grows in) is
distributed separately and is not bundled here. This generator produces a
corpus with the same shape over the same 70 region codes: species are drawn
from the published 31-region reference grouping, grow in a random subset of
their home region's codes, and occasionally spill into a neighbouring
group. The spill is what leaves weak cross-cluster counts behind, so the
extraction step has realistic residual links to report.

Only ``random.Random.random()`` is used for randomness; its output is
stable across interpreter versions, so a given (records, seed) pair always
yields byte-identical text.
"""

from __future__ import annotations

import random

from .ingest import ReferenceClusters, load_fixture

DEFAULT_RECORDS = 34781
DEFAULT_SEED = 77201

# Chance a home-region code joins the record, and chance the record spills
# one code into the next region over.
KEEP = 0.8
SPILL = 0.12


def _pick(rng: random.Random, items):
    return items[int(rng.random() * len(items))]


def synthetic_plants_text(records: int = DEFAULT_RECORDS, seed: int = DEFAULT_SEED) -> str:
    """Transaction lines for a synthetic species-by-region corpus.

    The first 31 records list each reference group in full, which pins the
    vocabulary to all 70 codes (for ``records`` below 31 the coverage rows
    are truncated and the vocabulary with them).
    """
    reference = load_fixture("plants_reference")
    assert isinstance(reference, ReferenceClusters)
    groups = [list(cluster) for cluster in reference.cluster_label_sets]

    rng = random.Random(seed)
    lines: list[str] = []
    for gi, group in enumerate(groups):
        if len(lines) >= records:
            break
        lines.append(f"seed{gi:02d}," + ",".join(group))

    while len(lines) < records:
        gi = int(rng.random() * len(groups))
        group = groups[gi]
        members = [code for code in group if rng.random() < KEEP]
        if not members:
            members = [_pick(rng, group)]
        if rng.random() < SPILL:
            extra = _pick(rng, groups[(gi + 1) % len(groups)])
            if extra not in members:
                members.append(extra)
        lines.append(f"sp{len(lines):05d}," + ",".join(members))
    return "\n".join(lines) + "\n"


def write_synthetic_plants(
    path: str, records: int = DEFAULT_RECORDS, seed: int = DEFAULT_SEED
) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as out:
        out.write(synthetic_plants_text(records, seed))
