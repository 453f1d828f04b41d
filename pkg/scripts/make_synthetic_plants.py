#!/usr/bin/env python3
"""Write the synthetic species-by-region transaction corpus to a file.

The output is a deterministic function of (records, seed), so regenerating
with the same arguments always gives byte-identical data.
"""

import argparse

from patterngrid.synth import DEFAULT_RECORDS, DEFAULT_SEED, write_synthetic_plants


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="path to write")
    parser.add_argument("--records", type=int, default=DEFAULT_RECORDS)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args()
    write_synthetic_plants(args.out, args.records, args.seed)
    print(f"wrote {args.records} records to {args.out}")


if __name__ == "__main__":
    main()
