"""Time both exact solvers across array sizes and plot the scaling.

Usage: python scripts/runtime_sweep.py --sizes 4,6,8,10,12,16 --runs 3 \
           --csv runtime.csv --out runtime.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from anm2d import serialize
from anm2d.bench import RUNTIME_HEADER, run_runtime_sweep, runtime_rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="4,6,8,12,16")
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--runs", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None, help="also write the raw table")
    ap.add_argument("--out", default="runtime_sweep.png")
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s]
    records = run_runtime_sweep(sizes, k=args.k, seed=args.seed, runs=args.runs)
    if args.csv:
        serialize.write_csv(args.csv, RUNTIME_HEADER, runtime_rows(records),
                            {"k": args.k, "seed": args.seed, "runs": args.runs})
        print(f"wrote {args.csv}")

    fig, ax = plt.subplots(figsize=(6, 4))
    for method in ("decoupled", "vectorized"):
        byn = {}
        for r in records:
            if r.method == method and not np.isnan(r.wall_seconds):
                byn.setdefault(r.n, []).append(r.wall_seconds)
        ns = sorted(byn)
        ax.plot(ns, [float(np.median(byn[n])) for n in ns], marker="o",
                label=method)
    ax.set_xlabel("array side n")
    ax.set_ylabel("median wall time [s]")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
