#!/usr/bin/env python3
"""Run every acceptance command through the CLI and print a one-line verdict per report."""

import argparse
import json
import time
from pathlib import Path

from artifact import cli

COMMANDS = [
    ["lorenz"],
    ["lyons", "--task", "all"],
    ["qnl", "--model", "affine"],
    ["qnl", "--model", "lyons-sub"],
    ["tree"],
    ["moments"],
    ["staircase"],
    ["mp", "--alphas", "0.1,0.3,0.5,0.7,0.9"],
    ["fourier", "--model", "uniform"],
    ["fourier", "--model", "cantor"],
    ["census", "--ns", "2,3,4,5"],
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=None)
    a = ap.parse_args()
    for i, args in enumerate(COMMANDS):
        out = Path(a.out) / f"{i:02d}_{'_'.join(x.lstrip('-') for x in args)}"
        extra = ["--out", str(out), "--seed", str(a.seed)]
        if a.workers:
            extra += ["--workers", str(a.workers)]
        t0 = time.perf_counter()
        code = cli.main(args + extra)
        rep = json.loads((out / f"{args[0]}.json").read_text())
        print(f"{' '.join(args):45s} exit={code} pass={rep['pass']} {time.perf_counter() - t0:6.1f}s")


if __name__ == "__main__":
    main()
