"""Monte Carlo frequency MSE versus SNR for one array geometry.

Usage: python scripts/mse_vs_snr.py --n 16 --k 4 --snrs 0,10,20,30 \
           --trials 100 --csv mse.csv --out mse.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from anm2d import serialize
from anm2d.bench import MSE_HEADER, mse_rows, run_mc_mse
from anm2d.model import ArrayGeometry
from anm2d.scenario import random_scenario
from anm2d.solvers import SolverSettings


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--snrs", default="0,10,20,30")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--methods", default="decoupled")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--csv", default=None, help="also write the raw table")
    ap.add_argument("--out", default="mse_vs_snr.png")
    args = ap.parse_args()

    snrs = [float(s) for s in args.snrs.split(",") if s]
    methods = tuple(args.methods.split(","))
    template = random_scenario(ArrayGeometry(args.n, args.n), args.k, None,
                               seed=args.seed)
    records = run_mc_mse(snrs, args.trials, template, methods=methods,
                         workers=args.workers)
    if args.csv:
        serialize.write_csv(args.csv, MSE_HEADER, mse_rows(records),
                            {"n": args.n, "k": args.k, "seed": args.seed,
                             "trials": args.trials})
        print(f"wrote {args.csv}")

    fig, ax = plt.subplots(figsize=(6, 4))
    for method in methods:
        pts = [(r.snr_db, r.mse) for r in records if r.method == method]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=method)
    floor = SolverSettings().abs_tol ** 2
    ax.axhline(floor, color="gray", ls="--", lw=0.8,
               label="solver tolerance floor")
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel("frequency MSE")
    ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
