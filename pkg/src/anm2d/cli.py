"""Command line interface.

Commands: simulate (scenario -> snapshot), estimate (snapshot -> result),
certify (snapshot + result -> certificate report), bench-runtime, mc-mse,
plot. All outputs are canonically serialized (sorted keys, fixed float
formatting, no timestamps) so repeated runs with the same inputs are
byte-identical; benchmark wall times are the one intentional exception.

Exit codes: 0 success, 2 invalid input, 3 solver non-convergence (the record
is still written, flagged), 4 missing artifact such as an absent certificate.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

import numpy as np

from . import __version__, bench, serialize
from .dualcert import certify
from .exceptions import (Anm2dError, CapacityError,
                         CertificateUnavailableError, ScenarioError)
from .model import ObservationModel, Source, SourceSet
from .pipeline import METHODS, estimate
from .scenario import load_scenario, realize, scenario_to_dict
from .solvers import SolverSettings, lambda_heuristic

DEFAULT_CERT_GRID = 1024
DEFAULT_CERT_TOL = 1e-3


def _settings_from_args(args) -> SolverSettings:
    kw = {}
    if args.max_iters is not None:
        kw["max_iters"] = args.max_iters
    if args.tol is not None:
        kw["abs_tol"] = args.tol
        kw["rel_tol"] = args.tol
    return SolverSettings(**kw)


def _settings_meta(st: SolverSettings) -> dict:
    return {"max_iters": st.max_iters, "abs_tol": st.abs_tol,
            "rel_tol": st.rel_tol, "penalty_rho": st.penalty_rho}


def _require(doc: dict, name: str, ctx: str):
    if name not in doc:
        raise ValueError(f"missing field '{name}' in {ctx}")
    return doc[name]


def _read_json_or_fail(path, ctx: str) -> dict:
    try:
        doc = serialize.read_json(path)
    except FileNotFoundError:
        raise ValueError(f"{ctx} file not found: {path}")
    except ValueError as exc:
        raise ValueError(f"{ctx} file {path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ValueError(f"{ctx} file {path} must hold a JSON object")
    return doc


def cmd_simulate(args) -> int:
    sc = load_scenario(args.scenario)
    if args.snr is not None:
        sc = replace(sc, snr_db=args.snr)
    if args.seed is not None:
        sc = replace(sc, seed=args.seed)
    _, y = realize(sc)
    doc = {
        "meta": {"version": __version__, "seed": sc.seed},
        "n_x": sc.geom.n_x,
        "n_y": sc.geom.n_y,
        "snr_db": sc.snr_db,
        "seed": sc.seed,
        "mask": None if sc.mask is None else sc.mask.astype(bool).tolist(),
        "y": serialize.complex_to_interleaved(y),
        "scenario": scenario_to_dict(sc),
    }
    serialize.write_json(args.out, doc)
    return 0


def _load_snapshot(path):
    snap = _read_json_or_fail(path, "snapshot")
    n_x = int(_require(snap, "n_x", "snapshot"))
    n_y = int(_require(snap, "n_y", "snapshot"))
    y = serialize.interleaved_to_complex(_require(snap, "y", "snapshot"))
    if y.shape != (n_x, n_y):
        raise ValueError(f"snapshot y has shape {y.shape}, expected {(n_x, n_y)}")
    return snap, y


def cmd_estimate(args) -> int:
    snap, y = _load_snapshot(args.snapshot)
    n_x, n_y = y.shape
    snr_db = snap.get("snr_db")
    order = None
    scen = snap.get("scenario")
    if isinstance(scen, dict) and isinstance(scen.get("sources"), list):
        order = len(scen["sources"])
        if order > min(n_x, n_y):
            raise CapacityError(
                f"snapshot claims {order} sources, above the per-axis "
                f"capacity {min(n_x, n_y)} of a {n_x}x{n_y} array")
    obs = None
    if snap.get("mask") is not None:
        obs = ObservationModel("mask", np.asarray(snap["mask"], dtype=bool))
    lam = args.lam
    if lam is None and snr_db is not None:
        # sigma from the observed power: E||y||^2 = n_obs sigma^2 (snr + 1)
        n_obs = int(obs.mask.sum()) if obs is not None else y.size
        snr_lin = 10 ** (float(snr_db) / 10)
        sigma = float(np.linalg.norm(y) / np.sqrt(n_obs * (snr_lin + 1.0)))
        lam = lambda_heuristic(sigma, n_x, n_y)
    st = _settings_from_args(args)
    res = estimate(y, method=args.method, observation=obs, lam=lam,
                   order=order, settings=st)
    sol = res.solution
    doc = {
        "meta": {"version": __version__, "seed": snap.get("seed"),
                 "settings": _settings_meta(st), "lambda": lam},
        "method": res.method,
        "n_x": n_x,
        "n_y": n_y,
        "order": res.order,
        "objective": sol.objective,
        "iterations": sol.iterations,
        "primal_residual": sol.primal_residual,
        "dual_residual": sol.dual_residual,
        "converged": sol.converged,
        "pairs": [
            {"f_x": fx, "f_y": fy, "amp_re": a.real, "amp_im": a.imag,
             "score": sc_}
            for (fx, fy, a), sc_ in zip(res.estimate.pairs,
                                        res.estimate.match_scores)
        ],
    }
    if res.method == "decoupled":
        doc["u_x"] = serialize.complex_to_interleaved(sol.u_x.first_row)
        doc["u_y"] = serialize.complex_to_interleaved(sol.u_y.first_row)
        cert = sol.dual_certificate_matrix
        doc["dual_certificate"] = (None if cert is None
                                   else serialize.complex_to_interleaved(cert))
    else:
        doc["aux_scalar_v"] = sol.v
        doc["u2d"] = serialize.complex_to_interleaved(sol.u2d.lags)
        doc["dual_certificate"] = None
    serialize.write_json(args.out, doc)
    if not sol.converged:
        print(f"warning: solver stopped at iteration {sol.iterations} without "
              f"converging (pri={sol.primal_residual:.3e}, "
              f"dua={sol.dual_residual:.3e})", file=sys.stderr)
        return 3
    return 0


def cmd_certify(args) -> int:
    snap, _ = _load_snapshot(args.snapshot)
    res = _read_json_or_fail(args.result, "result")
    if not _require(res, "converged", "result"):
        raise CertificateUnavailableError(
            "result records an unconverged solve; its certificate is not valid")
    cert = res.get("dual_certificate")
    if cert is None:
        raise CertificateUnavailableError(
            "result carries no dual certificate (vectorized method or "
            "pre-certificate record)")
    q = serialize.interleaved_to_complex(cert)
    expected = (int(_require(snap, "n_x", "snapshot")),
                int(_require(snap, "n_y", "snapshot")))
    if q.shape != expected:
        raise ValueError(f"certificate shape {q.shape} does not match the "
                         f"snapshot array {expected}")
    pairs = _require(res, "pairs", "result")
    if not pairs:
        raise ValueError("result contains no estimated pairs to certify")
    support = SourceSet(tuple(
        Source(p["f_x"], p["f_y"], complex(p["amp_re"], p["amp_im"]))
        for p in pairs))
    g = args.grid if args.grid is not None else DEFAULT_CERT_GRID
    tol = args.tol if args.tol is not None else DEFAULT_CERT_TOL
    report = certify(q, support, grid=(g, g), tol=tol)
    doc = {
        "meta": {"version": __version__, "tol": tol},
        "passed": report.passed,
        "interpolation_errors": report.interpolation_errors,
        "max_offgrid_modulus": report.max_offgrid_modulus,
        "grid": list(report.grid_density),
        "exclusion_radius": report.exclusion_radius,
    }
    if args.out:
        serialize.write_json(args.out, doc)
    else:
        print(serialize.canonical_json(doc))
    return 0


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def cmd_bench_runtime(args) -> int:
    st = _settings_from_args(args)
    seed = args.seed if args.seed is not None else 0
    records = bench.run_runtime_sweep(args.sizes, k=args.k, seed=seed,
                                      runs=args.runs, settings=st)
    meta = {"version": __version__, "k": args.k, "seed": seed,
            "runs": args.runs, **_settings_meta(st)}
    serialize.write_csv(args.out, bench.RUNTIME_HEADER,
                        bench.runtime_rows(records), meta)
    return 0


def cmd_mc_mse(args) -> int:
    template = load_scenario(args.scenario)
    if args.seed is not None:
        template = replace(template, seed=args.seed)
    st = _settings_from_args(args)
    methods = tuple(args.methods.split(","))
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected from {METHODS}")
    records = bench.run_mc_mse(args.snrs, args.trials, template,
                               methods=methods, settings=st)
    meta = {"version": __version__, "seed": template.seed,
            "trials": args.trials, "k": len(template.sources),
            "n_x": template.geom.n_x, "n_y": template.geom.n_y,
            **_settings_meta(st)}
    serialize.write_csv(args.out, bench.MSE_HEADER, bench.mse_rows(records), meta)
    return 0


def cmd_plot(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    header, rows, meta = serialize.read_csv(args.table)
    fig, ax = plt.subplots(figsize=(6, 4))
    if args.kind == "runtime":
        idx = {h: i for i, h in enumerate(header)}
        series: dict[str, dict[int, list[float]]] = {}
        for row in rows:
            wall = float(row[idx["wall_seconds"]])
            if np.isnan(wall):
                continue
            series.setdefault(row[idx["method"]], {}).setdefault(
                int(row[idx["n"]]), []).append(wall)
        for method, byn in sorted(series.items()):
            ns = sorted(byn)
            ax.plot(ns, [float(np.median(byn[n])) for n in ns],
                    marker="o", label=method)
        ax.set_xlabel("array side n")
        ax.set_ylabel("median wall time [s]")
        ax.set_yscale("log")
    elif args.kind == "mse":
        idx = {h: i for i, h in enumerate(header)}
        series = {}
        for row in rows:
            series.setdefault(row[idx["method"]], {}).setdefault(
                float(row[idx["snr_db"]]), []).append(float(row[idx["mse"]]))
        for method, bys in sorted(series.items()):
            snrs = sorted(bys)
            ax.plot(snrs, [bys[s][0] for s in snrs], marker="o", label=method)
        tol = float(meta.get("abs_tol", 1e-6))
        # no CRB available; show the solver-tolerance-induced error floor
        ax.axhline(tol ** 2, color="gray", ls="--", lw=0.8,
                   label="solver tolerance floor")
        ax.set_xlabel("SNR [dB]")
        ax.set_ylabel("MSE")
        ax.set_yscale("log")
    else:
        raise ValueError(f"unknown plot kind {args.kind!r}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="anm2d",
                                description="Gridless 2D frequency estimation "
                                            "via decoupled atomic-norm SDPs")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_solver_flags(sp):
        sp.add_argument("--max-iters", type=int, default=None)
        sp.add_argument("--tol", type=float, default=None,
                        help="absolute and relative solver tolerance")

    sp = sub.add_parser("simulate", help="synthesize a snapshot from a scenario")
    sp.add_argument("scenario")
    sp.add_argument("--out", required=True)
    sp.add_argument("--snr", type=float, default=None,
                    help="override the scenario SNR in dB")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("estimate", help="recover frequency pairs from a snapshot")
    sp.add_argument("snapshot")
    sp.add_argument("--out", required=True)
    sp.add_argument("--method", choices=METHODS, default="decoupled")
    sp.add_argument("--lambda", dest="lam", type=float, default=None,
                    help="regularization weight; default from the SNR heuristic")
    add_solver_flags(sp)
    sp.set_defaults(func=cmd_estimate)

    sp = sub.add_parser("certify", help="check the dual certificate of a result")
    sp.add_argument("snapshot")
    sp.add_argument("result")
    sp.add_argument("--grid", type=int, default=None,
                    help=f"grid points per axis (default {DEFAULT_CERT_GRID})")
    sp.add_argument("--tol", type=float, default=None,
                    help=f"certification tolerance (default {DEFAULT_CERT_TOL})")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("bench-runtime", help="time both solvers across sizes")
    sp.add_argument("--sizes", type=_int_list, required=True)
    sp.add_argument("--k", type=int, default=4)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--runs", type=int, default=1)
    sp.add_argument("--out", required=True)
    add_solver_flags(sp)
    sp.set_defaults(func=cmd_bench_runtime)

    sp = sub.add_parser("mc-mse", help="Monte Carlo MSE versus SNR")
    sp.add_argument("scenario", help="template fixing geometry and model order")
    sp.add_argument("--snrs", type=_float_list, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--methods", default="decoupled")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--out", required=True)
    add_solver_flags(sp)
    sp.set_defaults(func=cmd_mc_mse)

    sp = sub.add_parser("plot", help="render a line chart from a benchmark CSV")
    sp.add_argument("table")
    sp.add_argument("--kind", choices=("runtime", "mse"), required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_plot)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CertificateUnavailableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ScenarioError, CapacityError, ValueError, FileNotFoundError,
            Anm2dError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
