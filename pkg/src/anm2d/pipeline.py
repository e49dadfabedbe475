"""End-to-end estimation: solve, decompose, pair.

estimate() dispatches on method and noise handling, returning the paired
frequency estimates together with the raw solver output so downstream tools
(certification, benchmarks, the CLI) can reuse intermediate quantities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decompose import estimate_order, music2d_peaks, vandermonde_decompose
from .exceptions import CapacityError
from .model import ComplexMat, ObservationModel, steering_vector
from .pairing import PairedEstimate, pair_angles
from .solvers import (SdpSolution, SolverSettings, VectorizedSolution,
                      solve_decoupled_exact, solve_decoupled_regularized,
                      solve_vectorized, solve_vectorized_regularized)
from .toeplitz import (HermToeplitz, toeplitz_materialize,
                       two_level_materialize)

METHODS = ("decoupled", "vectorized")


@dataclass(frozen=True)
class EstimateOutcome:
    method: str
    estimate: PairedEstimate
    solution: SdpSolution | VectorizedSolution
    order: int


def _check_capacity(order: int, n_x: int, n_y: int) -> None:
    cap = min(n_x, n_y)
    if order > cap:
        raise CapacityError(
            f"model order {order} exceeds per-axis capacity {cap} "
            f"for a {n_x}x{n_y} array")


def _pick_program(observation: ObservationModel | None, lam: float | None) -> bool:
    """True when the regularized program applies; rejects masked-without-lam."""
    noisy = lam is not None and lam > 0
    masked = observation is not None and observation.kind == "mask"
    if masked and not noisy:
        raise ValueError("masked observations need lam > 0; the exact program "
                         "assumes a fully observed snapshot")
    return noisy


def estimate_decoupled(y: ComplexMat,
                       observation: ObservationModel | None = None,
                       lam: float | None = None,
                       order: int | None = None,
                       settings: SolverSettings | None = None,
                       ) -> EstimateOutcome:
    """Decoupled path: structured SDP, per-axis decomposition, pairing."""
    n_x, n_y = y.shape
    if _pick_program(observation, lam):
        obs = observation or ObservationModel()
        sol = solve_decoupled_regularized(y, obs, lam, settings=settings)
    else:
        sol = solve_decoupled_exact(y, settings=settings)
    t_x = toeplitz_materialize(sol.u_x)
    t_y = toeplitz_materialize(sol.u_y)
    if order is None:
        order = min(estimate_order(t_x), estimate_order(t_y))
    _check_capacity(order, n_x, n_y)
    if order == 0:
        return EstimateOutcome("decoupled", PairedEstimate([], []), sol, 0)
    fx = vandermonde_decompose(t_x, order)
    fy = vandermonde_decompose(t_y, order)
    paired = pair_angles(sol.x_hat, fx.freqs, fx.powers, fy.freqs)
    return EstimateOutcome("decoupled", paired, sol, order)


def _vectorized_amplitudes(x_hat: np.ndarray, n_x: int, n_y: int,
                           peaks: list[tuple[float, float]]) -> np.ndarray:
    # least squares against vec(a_x a_y^H) in column-major order
    cols = []
    for fx, fy in peaks:
        ax = steering_vector(n_x, fx)
        ay = steering_vector(n_y, fy)
        cols.append(np.outer(ax, ay.conj()).ravel(order="F"))
    if not cols:
        return np.array([])
    return np.linalg.lstsq(np.column_stack(cols), x_hat, rcond=None)[0]


def estimate_vectorized(y: ComplexMat,
                        observation: ObservationModel | None = None,
                        lam: float | None = None,
                        order: int | None = None,
                        settings: SolverSettings | None = None,
                        grid: tuple[int, int] = (512, 512),
                        ) -> EstimateOutcome:
    """Vectorized baseline: full-size SDP, 2D MUSIC on the two-level Toeplitz."""
    n_x, n_y = y.shape
    if _pick_program(observation, lam):
        obs = observation or ObservationModel()
        sol = solve_vectorized_regularized(y.ravel(order="F"), n_x, n_y, obs,
                                           lam, settings=settings)
    else:
        sol = solve_vectorized(y.ravel(order="F"), n_x, n_y, settings=settings)
    if order is None:
        order = estimate_order(two_level_materialize(sol.u2d))
    _check_capacity(order, n_x, n_y)
    if order == 0:
        return EstimateOutcome("vectorized", PairedEstimate([], []), sol, 0)
    peaks = music2d_peaks(sol.u2d, order, grid[0], grid[1])
    amps = _vectorized_amplitudes(sol.x_hat, n_x, n_y, peaks)
    idx = sorted(range(len(peaks)), key=lambda i: peaks[i][0])
    pairs = [(peaks[i][0], peaks[i][1], complex(amps[i])) for i in idx]
    return EstimateOutcome("vectorized", PairedEstimate(pairs, [1.0] * len(pairs)),
                           sol, order)


def estimate(y: ComplexMat, method: str = "decoupled",
             observation: ObservationModel | None = None,
             lam: float | None = None, order: int | None = None,
             settings: SolverSettings | None = None) -> EstimateOutcome:
    if method == "decoupled":
        return estimate_decoupled(y, observation, lam, order, settings)
    if method == "vectorized":
        return estimate_vectorized(y, observation, lam, order, settings)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
