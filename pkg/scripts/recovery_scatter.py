"""Scatter plot of true versus estimated frequency pairs for one scenario.

Usage: python scripts/recovery_scatter.py --n 16 --k 4 --snr 20 --seed 0 \
           --out scatter.png
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from anm2d.bench import run_recovery_scatter
from anm2d.model import ArrayGeometry
from anm2d.pipeline import METHODS
from anm2d.scenario import random_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=16, help="array side length")
    ap.add_argument("--k", type=int, default=4, help="number of sources")
    ap.add_argument("--snr", type=float, default=None, help="SNR in dB")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--methods", default="decoupled",
                    help=f"comma separated, from {METHODS}")
    ap.add_argument("--out", default="recovery_scatter.png")
    args = ap.parse_args()

    sc = random_scenario(ArrayGeometry(args.n, args.n), args.k, args.snr,
                         seed=args.seed)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(sc.sources.freqs_x, sc.sources.freqs_y, marker="o", s=120,
               facecolors="none", edgecolors="k", label="truth")
    for method, marker in zip(args.methods.split(","), "x+*"):
        out = run_recovery_scatter(sc, method=method)
        ax.scatter(out["est_fx"], out["est_fy"], marker=marker, s=60,
                   label=f"{method}{'' if out['converged'] else ' (unconverged)'}")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_xlabel("f_x")
    ax.set_ylabel("f_y")
    ax.set_title(f"{args.n}x{args.n}, k={args.k}, "
                 f"snr={'noise free' if args.snr is None else args.snr}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
