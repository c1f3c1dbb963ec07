#!/usr/bin/env python3
"""Generate werner_p.json: p |phi+><phi+| + (1-p) I/4 on C^2 (x) C^2.

Usage: gen_werner.py [-p P] [-o OUTPUT]

The PPT verdict of the family flips at p = 1/3, which makes the output
handy for exercising `sepkit analyze` on both sides of the boundary.
"""

import argparse
import json


def werner_entries(p: float):
    entries = [[0.0, 0.0] for _ in range(16)]
    mixed = (1.0 - p) / 4.0
    for i in range(4):
        entries[i * 4 + i] = [mixed, 0.0]
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)]:
        entries[i * 4 + j][0] += p / 2.0
    return entries


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-p", type=float, default=0.5, help="mixing parameter in [0, 1]")
    parser.add_argument("-o", "--output", default="werner_p.json")
    args = parser.parse_args()
    if not 0.0 <= args.p <= 1.0:
        parser.error("p must lie in [0, 1]")

    doc = {
        "dims": {"dA": 2, "dB": 2},
        "kind": "state",
        "entries": werner_entries(args.p),
    }
    with open(args.output, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(f"wrote {args.output} (p = {args.p})")


if __name__ == "__main__":
    main()
