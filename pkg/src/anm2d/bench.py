"""Benchmark harness: runtime sweeps and Monte Carlo error curves.

Runtime records compare the decoupled solver (block size n_x + n_y) against
the vectorized baseline (block size n_x n_y + 1) on identical snapshots.
Monte Carlo trials draw fresh separated sources per trial, add noise at each
SNR, run the regularized estimators with the known model order, and score the
frequency error under an optimal assignment between estimate and truth.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .exceptions import Anm2dError
from .model import (ArrayGeometry, Source, SourceSet, noise_sigma, synthesize,
                    wrap_distance)
from .pipeline import estimate
from .scenario import (Scenario, default_min_separation, realize,
                       separated_frequencies)
from .solvers import (VECTORIZED_SIZE_CAP, SolverSettings, lambda_heuristic,
                      solve_decoupled_exact, solve_vectorized)

WORKERS_ENV = "ANM2D_WORKERS"

RUNTIME_HEADER = ["n", "method", "wall_seconds", "iterations", "converged"]
MSE_HEADER = ["snr_db", "method", "mse", "trials", "excluded"]


@dataclass(frozen=True)
class RuntimeRecord:
    n: int
    method: str
    wall_seconds: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class MseRecord:
    snr_db: float
    method: str
    mse: float
    trials: int
    excluded: int


def _random_sources(rng: np.random.Generator, n_x: int, n_y: int,
                    k: int) -> SourceSet:
    # constant-modulus draw keeps every source at the nominal SNR
    fx = separated_frequencies(rng, k, default_min_separation(n_x, k))
    fy = separated_frequencies(rng, k, default_min_separation(n_y, k))
    amps = np.exp(2j * np.pi * rng.uniform(0, 1, k))
    return SourceSet(tuple(Source(float(a), float(b), complex(c))
                           for a, b, c in zip(fx, fy, amps)))


def run_runtime_sweep(sizes, k: int = 4, seed: int = 0, runs: int = 1,
                      settings: SolverSettings | None = None,
                      size_cap: int = VECTORIZED_SIZE_CAP,
                      ) -> list[RuntimeRecord]:
    """Time both exact solvers on one snapshot per size, `runs` times each.

    Sizes above the vectorized cap get a placeholder record with
    wall_seconds = nan and converged = False instead of a days-long solve.
    """
    records = []
    for n in sizes:
        rng = np.random.default_rng([seed, n])
        srcs = _random_sources(rng, n, n, k)
        x = synthesize(ArrayGeometry(n, n), srcs)
        for _ in range(runs):
            t0 = time.perf_counter()
            sol = solve_decoupled_exact(x, settings=settings)
            records.append(RuntimeRecord(n, "decoupled", time.perf_counter() - t0,
                                         sol.iterations, sol.converged))
            if n * n > size_cap:
                records.append(RuntimeRecord(n, "vectorized", float("nan"), 0, False))
                continue
            t0 = time.perf_counter()
            vec = solve_vectorized(x.ravel(order="F"), n, n, settings=settings)
            records.append(RuntimeRecord(n, "vectorized", time.perf_counter() - t0,
                                         vec.iterations, vec.converged))
    return records


def pair_mse(est_fx, est_fy, true_fx, true_fy) -> float:
    """Mean squared wrap error per coordinate under the optimal pairing."""
    est_fx = np.asarray(est_fx, float)
    true_fx = np.asarray(true_fx, float)
    if len(est_fx) != len(true_fx):
        raise ValueError("estimate and truth must have equal length")
    cost = (wrap_distance(est_fx[:, None], true_fx[None, :]) ** 2
            + wrap_distance(np.asarray(est_fy, float)[:, None],
                            np.asarray(true_fy, float)[None, :]) ** 2)
    r, c = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[r, c].sum() / (2 * len(true_fx)))


def _mse_trial(n_x: int, n_y: int, k: int, base_seed: int, snr_idx: int,
               snr_db: float, trial: int, methods: tuple[str, ...],
               settings: SolverSettings | None,
               ) -> list[tuple[str, float | None]]:
    """One Monte Carlo trial; None marks an excluded (failed) method run."""
    rng = np.random.default_rng([base_seed, snr_idx, trial])
    srcs = _random_sources(rng, n_x, n_y, k)
    x = synthesize(ArrayGeometry(n_x, n_y), srcs)
    sigma = noise_sigma(x, snr_db)
    w = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    y = x + (sigma / np.sqrt(2)) * w
    lam = lambda_heuristic(sigma, n_x, n_y)
    out: list[tuple[str, float | None]] = []
    for method in methods:
        try:
            res = estimate(y, method=method, lam=lam, order=k, settings=settings)
        except Anm2dError:
            out.append((method, None))
            continue
        if not res.solution.converged or len(res.estimate) != k:
            out.append((method, None))
            continue
        out.append((method, pair_mse(res.estimate.freqs_x, res.estimate.freqs_y,
                                     srcs.freqs_x, srcs.freqs_y)))
    return out


def run_mc_mse(snrs, trials: int, template: Scenario,
               methods: tuple[str, ...] = ("decoupled",),
               settings: SolverSettings | None = None,
               workers: int | None = None) -> list[MseRecord]:
    """Monte Carlo MSE versus SNR for the template's geometry and order.

    Trial (i, t) is seeded with [template.seed, i, t], so results are
    deterministic and independent of the worker count. Both methods see the
    same noisy snapshot within a trial. Trials where a solver fails to
    converge or the estimate degenerates are excluded from the mean and
    counted in `excluded`.
    """
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    n_x, n_y = template.geom.n_x, template.geom.n_y
    k = len(template.sources)
    args = [(n_x, n_y, k, template.seed, i, float(snr), t, tuple(methods), settings)
            for i, snr in enumerate(snrs) for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_mse_trial_star, args))
    else:
        results = [_mse_trial(*a) for a in args]
    records = []
    for i, snr in enumerate(snrs):
        block = results[i * trials:(i + 1) * trials]
        for method in methods:
            vals = [v for res in block for m, v in res if m == method and v is not None]
            excluded = trials - len(vals)
            mse = float(np.mean(vals)) if vals else float("nan")
            records.append(MseRecord(float(snr), method, mse, trials, excluded))
    return records


def _mse_trial_star(a):
    return _mse_trial(*a)


def run_recovery_scatter(sc: Scenario, method: str = "decoupled",
                         settings: SolverSettings | None = None,
                         lam: float | None = None) -> dict:
    """Estimate one scenario and return truth/estimate pairs for plotting."""
    x, y = realize(sc)
    if lam is None and sc.snr_db is not None:
        lam = lambda_heuristic(noise_sigma(x, sc.snr_db), sc.geom.n_x, sc.geom.n_y)
    res = estimate(y, method=method, observation=sc.observation, lam=lam,
                   order=len(sc.sources), settings=settings)
    return {
        "method": method,
        "true_fx": sc.sources.freqs_x.tolist(),
        "true_fy": sc.sources.freqs_y.tolist(),
        "est_fx": res.estimate.freqs_x.tolist(),
        "est_fy": res.estimate.freqs_y.tolist(),
        "converged": bool(res.solution.converged),
    }


def runtime_rows(records: list[RuntimeRecord]) -> list[list]:
    return [[r.n, r.method, r.wall_seconds, r.iterations, r.converged]
            for r in records]


def mse_rows(records: list[MseRecord]) -> list[list]:
    return [[r.snr_db, r.method, r.mse, r.trials, r.excluded]
            for r in records]
