"""First-order splitting solvers for the atomic-norm SDPs.

All four programs share one template: alternate (a) a proximal update on the
structured block matrix S, whose diagonal blocks live on a Hermitian Toeplitz
subspace and absorb the trace objective as a constant diagonal shift, with
(b) projection of the consensus copy Z onto the PSD cone, plus a scaled dual
update. Per-iteration cost is one eigendecomposition of the block matrix.

Decoupled program over S = [[T(u_y), X^H], [X, T(u_x)]] with X an n_x by n_y
snapshot: the exact variant keeps X fixed to the data and minimizes
(trace T(u_x) + trace T(u_y)) / (2 sqrt(n_x n_y)), whose optimum equals the
atomic norm of X under the separation condition. The regularized variant
frees X and adds a squared data fit against the observed entries.

Vectorized baseline over S = [[v, x^H], [x, T2(u)]] of size n_x*n_y + 1 with
a two-level Toeplitz block; kept for runtime and accuracy comparison.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .model import ComplexMat, ObservationModel
from .toeplitz import (HermToeplitz, TwoLevelToeplitz, toeplitz_adjoint_project,
                       toeplitz_materialize, two_level_adjoint_project,
                       two_level_materialize)

CHECK_EVERY = 10
ADAPT_EVERY = 50
VECTORIZED_SIZE_CAP = 256


@dataclass(frozen=True)
class SolverSettings:
    max_iters: int = 50_000
    abs_tol: float = 1e-6
    rel_tol: float = 1e-6
    penalty_rho: float = 1.0
    verbose: bool = False

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.abs_tol <= 0 or self.rel_tol <= 0 or self.penalty_rho <= 0:
            raise ValueError("tolerances and penalty must be positive")


@dataclass
class SdpSolution:
    u_x: HermToeplitz
    u_y: HermToeplitz
    x_hat: ComplexMat
    objective: float
    iterations: int
    primal_residual: float
    dual_residual: float
    converged: bool
    aux_scalar_v: float | None = None
    dual_certificate_matrix: ComplexMat | None = field(default=None, repr=False)


@dataclass
class VectorizedSolution:
    v: float
    u2d: TwoLevelToeplitz
    objective: float
    x_hat: np.ndarray
    iterations: int
    primal_residual: float
    dual_residual: float
    converged: bool


def psd_project(h: ComplexMat) -> ComplexMat:
    """Frobenius-nearest PSD matrix: symmetrize, clip negative eigenvalues."""
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    w = np.maximum(w, 0.0)
    return (v * w) @ v.conj().T


def lambda_heuristic(sigma: float, n_x: int, n_y: int) -> float:
    """Default regularization weight 2 sigma * sqrt(n log n), n = n_x * n_y.

    The sqrt(n log n) rule is stated for a (1/2)||y - x||^2 data fit; the
    regularized programs here carry the fit with unit coefficient, which
    halves the effective weight, so the constant is doubled to compensate.
    """
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    n = n_x * n_y
    return 2.0 * sigma * math.sqrt(n * math.log(n))


def _zero_decoupled(n_x: int, n_y: int) -> SdpSolution:
    return SdpSolution(
        u_x=HermToeplitz(np.zeros(n_x, complex)),
        u_y=HermToeplitz(np.zeros(n_y, complex)),
        x_hat=np.zeros((n_x, n_y), complex),
        objective=0.0, iterations=0,
        primal_residual=0.0, dual_residual=0.0, converged=True,
        dual_certificate_matrix=np.zeros((n_x, n_y), complex),
    )


def solve_decoupled_exact(x: ComplexMat,
                          settings: SolverSettings | None = None,
                          warm_start: tuple[np.ndarray, np.ndarray] | None = None,
                          ) -> SdpSolution:
    """Minimize the two-Toeplitz trace objective with the snapshot held fixed.

    Parameters
    ----------
    x : complex (n_x, n_y) snapshot, held fixed in the PSD block constraint.
    settings : solver tolerances and penalty; defaults are SolverSettings().
    warm_start : optional (u_x, u_y) first rows to initialize the structured
        block, e.g. a known atomic decomposition. An initialization hint only:
        the dual variable still starts cold, so the iteration count may go
        either way; the solution is unaffected.

    Returns
    -------
    SdpSolution with the first rows of both Toeplitz blocks, the objective
    (equal to the atomic norm when the separation condition holds), residuals,
    and the rescaled dual block Q such that a_N(f_x)^H Q a_M(f_y) interpolates
    sign(s_k) at the support of an exact solution. Non-convergence within
    max_iters returns the best iterate with converged=False.
    """
    st = settings or SolverSettings()
    x = np.asarray(x, dtype=complex)
    n, m = x.shape
    if not np.any(x):
        return _zero_decoupled(n, m)
    d = n + m
    rho = st.penalty_rho
    scale = 1.0 / (2.0 * math.sqrt(n * m))
    s_mat = np.zeros((d, d), complex)
    s_mat[m:, :m] = x
    s_mat[:m, m:] = x.conj().T
    z = np.zeros((d, d), complex)
    if warm_start is not None:
        ux0, uy0 = warm_start
        s_mat[:m, :m] = toeplitz_materialize(HermToeplitz(np.asarray(uy0, complex)))
        s_mat[m:, m:] = toeplitz_materialize(HermToeplitz(np.asarray(ux0, complex)))
        z = psd_project(s_mat)
    v_dual = np.zeros((d, d), complex)
    ux = np.zeros(n, complex)
    uy = np.zeros(m, complex)
    pri = dua = np.inf
    eps_pri = eps_dua = 0.0
    wts_y = 2.0 * (m - np.arange(m))
    wts_x = 2.0 * (n - np.arange(n))
    it = 0
    for it in range(1, st.max_iters + 1):
        w = z - v_dual
        w = 0.5 * (w + w.conj().T)
        uy = toeplitz_adjoint_project(w[:m, :m]).first_row
        ux = toeplitz_adjoint_project(w[m:, m:]).first_row
        shift = scale / rho
        uy[0] = uy[0].real - shift
        ux[0] = ux[0].real - shift
        s_mat[:m, :m] = toeplitz_materialize(HermToeplitz(uy))
        s_mat[m:, m:] = toeplitz_materialize(HermToeplitz(ux))
        z_old = z
        z = psd_project(s_mat + v_dual)
        r = s_mat - z
        v_dual = v_dual + r
        if it % CHECK_EVERY == 0 or it == st.max_iters:
            pri = np.linalg.norm(r)
            dz = z - z_old
            # dual residual lives on the structured subspace (u_x, u_y only)
            s1 = toeplitz_adjoint_project(dz[:m, :m]).first_row
            s2 = toeplitz_adjoint_project(dz[m:, m:]).first_row
            dua = rho * math.sqrt(wts_y @ np.abs(s1) ** 2 + wts_x @ np.abs(s2) ** 2)
            eps_pri = st.abs_tol * d + st.rel_tol * max(np.linalg.norm(s_mat),
                                                        np.linalg.norm(z))
            eps_dua = st.abs_tol * d + st.rel_tol * rho * np.linalg.norm(v_dual)
            if st.verbose:
                print(f"iter {it}: pri={pri:.3e} dua={dua:.3e} rho={rho:g}")
            if pri <= eps_pri and dua <= eps_dua:
                break
            if it % ADAPT_EVERY == 0:
                if pri > 10 * dua:
                    rho *= 2.0
                    v_dual /= 2.0
                elif dua > 10 * pri:
                    rho /= 2.0
                    v_dual *= 2.0
    converged = bool(pri <= eps_pri and dua <= eps_dua)
    obj = scale * (n * ux[0].real + m * uy[0].real)
    cert = 2.0 * rho * v_dual[m:, :m] if converged else None
    return SdpSolution(
        u_x=HermToeplitz(ux), u_y=HermToeplitz(uy), x_hat=x,
        objective=float(obj), iterations=it,
        primal_residual=float(pri), dual_residual=float(dua),
        converged=converged, dual_certificate_matrix=cert,
    )


def solve_decoupled_regularized(y: ComplexMat, obs: ObservationModel,
                                lam: float,
                                settings: SolverSettings | None = None,
                                ) -> SdpSolution:
    """Jointly fit the snapshot and minimize the weighted trace objective.

    Solves min over (u_x, u_y, X) of
    lam/(2 sqrt(n_x n_y)) (trace T(u_x) + trace T(u_y)) + ||Y - L(X)||_F^2
    under the decoupled PSD block constraint, with L the entrywise observation
    operator. The reported objective is the full regularized value.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    st = settings or SolverSettings()
    y = np.asarray(y, dtype=complex)
    n, m = y.shape
    observed = np.ones((n, m), bool) if obs.kind == "full" else obs.mask
    d = n + m
    rho = st.penalty_rho
    scale = lam / (2.0 * math.sqrt(n * m))
    s_mat = np.zeros((d, d), complex)
    z = np.zeros((d, d), complex)
    v_dual = np.zeros((d, d), complex)
    x_hat = np.zeros((n, m), complex)
    ux = np.zeros(n, complex)
    uy = np.zeros(m, complex)
    pri = dua = np.inf
    eps_pri = eps_dua = 0.0
    it = 0
    for it in range(1, st.max_iters + 1):
        w = z - v_dual
        w = 0.5 * (w + w.conj().T)
        uy = toeplitz_adjoint_project(w[:m, :m]).first_row
        ux = toeplitz_adjoint_project(w[m:, m:]).first_row
        shift = scale / rho
        uy[0] = uy[0].real - shift
        ux[0] = ux[0].real - shift
        wx = 0.5 * (w[m:, :m] + w[:m, m:].conj().T)
        # data-fit prox; X enters two blocks, doubling the penalty weight
        x_hat = np.where(observed, (y + rho * wx) / (1.0 + rho), wx)
        s_mat[:m, :m] = toeplitz_materialize(HermToeplitz(uy))
        s_mat[m:, m:] = toeplitz_materialize(HermToeplitz(ux))
        s_mat[m:, :m] = x_hat
        s_mat[:m, m:] = x_hat.conj().T
        z_old = z
        z = psd_project(s_mat + v_dual)
        r = s_mat - z
        v_dual = v_dual + r
        if it % CHECK_EVERY == 0 or it == st.max_iters:
            pri = np.linalg.norm(r)
            dua = rho * np.linalg.norm(z - z_old)
            eps_pri = st.abs_tol * d + st.rel_tol * max(np.linalg.norm(s_mat),
                                                        np.linalg.norm(z))
            eps_dua = st.abs_tol * d + st.rel_tol * rho * np.linalg.norm(v_dual)
            if st.verbose:
                print(f"iter {it}: pri={pri:.3e} dua={dua:.3e} rho={rho:g}")
            if pri <= eps_pri and dua <= eps_dua:
                break
            if it % ADAPT_EVERY == 0:
                if pri > 10 * dua:
                    rho *= 2.0
                    v_dual /= 2.0
                elif dua > 10 * pri:
                    rho /= 2.0
                    v_dual *= 2.0
    converged = bool(pri <= eps_pri and dua <= eps_dua)
    atom_part = (n * ux[0].real + m * uy[0].real) / (2.0 * math.sqrt(n * m))
    fit = float(np.linalg.norm(np.where(observed, y - x_hat, 0)) ** 2)
    cert = None
    if converged and lam > 0:
        # dual block of the data-fit term, on the same scale as the exact path
        cert = (2.0 / lam) * np.where(observed, y - x_hat, 0)
    return SdpSolution(
        u_x=HermToeplitz(ux), u_y=HermToeplitz(uy), x_hat=x_hat,
        objective=float(lam * atom_part + fit), iterations=it,
        primal_residual=float(pri), dual_residual=float(dua),
        converged=converged, dual_certificate_matrix=cert,
    )


def _vectorized_loop(x_data: np.ndarray | None, y_data: np.ndarray,
                     n_x: int, n_y: int, observed_vec: np.ndarray | None,
                     trace_coeff: float, st: SolverSettings,
                     ) -> VectorizedSolution:
    """Shared splitting loop; x_data fixes x (exact), else x is fit to y_data."""
    nm = n_x * n_y
    d = nm + 1
    rho = st.penalty_rho
    s_mat = np.zeros((d, d), complex)
    z = np.zeros((d, d), complex)
    v_dual = np.zeros((d, d), complex)
    if x_data is not None:
        s_mat[1:, 0] = x_data
        s_mat[0, 1:] = x_data.conj()
    x_vec = np.zeros(nm, complex) if x_data is None else x_data
    v_scalar = 0.0
    lags = None
    pri = dua = np.inf
    eps_pri = eps_dua = 0.0
    it = 0
    for it in range(1, st.max_iters + 1):
        w = z - v_dual
        w = 0.5 * (w + w.conj().T)
        shift = trace_coeff / rho
        v_scalar = w[0, 0].real - shift
        t2 = two_level_adjoint_project(w[1:, 1:], n_x, n_y)
        lags = t2.lags
        lags[n_x - 1, 0] = lags[n_x - 1, 0].real - shift
        if x_data is None:
            wv = 0.5 * (w[1:, 0] + w[0, 1:].conj())
            x_vec = np.where(observed_vec, (y_data + rho * wv) / (1.0 + rho), wv)
            s_mat[1:, 0] = x_vec
            s_mat[0, 1:] = x_vec.conj()
        s_mat[0, 0] = v_scalar
        s_mat[1:, 1:] = two_level_materialize(TwoLevelToeplitz(lags, n_x, n_y))
        z_old = z
        z = psd_project(s_mat + v_dual)
        r = s_mat - z
        v_dual = v_dual + r
        if it % CHECK_EVERY == 0 or it == st.max_iters:
            pri = np.linalg.norm(r)
            dua = rho * np.linalg.norm(z - z_old)
            eps_pri = st.abs_tol * d + st.rel_tol * max(np.linalg.norm(s_mat),
                                                        np.linalg.norm(z))
            eps_dua = st.abs_tol * d + st.rel_tol * rho * np.linalg.norm(v_dual)
            if st.verbose:
                print(f"iter {it}: pri={pri:.3e} dua={dua:.3e} rho={rho:g}")
            if pri <= eps_pri and dua <= eps_dua:
                break
            if it % ADAPT_EVERY == 0:
                if pri > 10 * dua:
                    rho *= 2.0
                    v_dual /= 2.0
                elif dua > 10 * pri:
                    rho /= 2.0
                    v_dual *= 2.0
    converged = bool(pri <= eps_pri and dua <= eps_dua)
    trace_val = nm * lags[n_x - 1, 0].real
    if x_data is not None:
        obj = 0.5 * (v_scalar + trace_val)
    else:
        fit = float(np.linalg.norm(np.where(observed_vec, y_data - x_vec, 0)) ** 2)
        obj = trace_coeff * (v_scalar + trace_val) + fit
    return VectorizedSolution(
        v=float(v_scalar), u2d=TwoLevelToeplitz(lags, n_x, n_y),
        objective=float(obj), x_hat=x_vec, iterations=it,
        primal_residual=float(pri), dual_residual=float(dua), converged=converged,
    )


def _check_cap(nm: int, size_cap: int) -> None:
    if nm > size_cap:
        warnings.warn(
            f"vectorized SDP size {nm} exceeds the cap {size_cap}; "
            "expect a very long solve", RuntimeWarning, stacklevel=3,
        )


def solve_vectorized(x: np.ndarray, n_x: int, n_y: int,
                     settings: SolverSettings | None = None,
                     size_cap: int = VECTORIZED_SIZE_CAP,
                     ) -> VectorizedSolution:
    """Baseline SDP on the vectorized snapshot x = vec(X), column-major.

    Minimizes (v + trace T2(u)) / 2 subject to [[v, x^H], [x, T2(u)]] PSD.
    The objective equals sqrt(n_x n_y) times the decoupled objective on the
    same data. Warns when n_x * n_y exceeds size_cap.
    """
    st = settings or SolverSettings()
    x = np.asarray(x, dtype=complex).ravel()
    nm = n_x * n_y
    if x.size != nm:
        raise ValueError(f"x has length {x.size}, expected {nm}")
    if not np.any(x):
        return VectorizedSolution(
            v=0.0, u2d=TwoLevelToeplitz(np.zeros((2 * n_x - 1, n_y), complex),
                                        n_x, n_y),
            objective=0.0, x_hat=x, iterations=0,
            primal_residual=0.0, dual_residual=0.0, converged=True,
        )
    _check_cap(nm, size_cap)
    return _vectorized_loop(x, x, n_x, n_y, None, 0.5, st)


def solve_vectorized_regularized(y: np.ndarray, n_x: int, n_y: int,
                                 obs: ObservationModel, lam: float,
                                 settings: SolverSettings | None = None,
                                 size_cap: int = VECTORIZED_SIZE_CAP,
                                 ) -> VectorizedSolution:
    """Noisy-data variant of the vectorized baseline.

    Minimizes lam/(2 sqrt(n_x n_y)) (v + trace T2(u)) + ||y - L(x)||^2 with x
    free, mirroring the decoupled regularized program on vectorized data.
    """
    if lam < 0:
        raise ValueError("lambda must be >= 0")
    st = settings or SolverSettings()
    y = np.asarray(y, dtype=complex).ravel()
    nm = n_x * n_y
    if y.size != nm:
        raise ValueError(f"y has length {y.size}, expected {nm}")
    _check_cap(nm, size_cap)
    if obs.kind == "full":
        observed_vec = np.ones(nm, bool)
    else:
        observed_vec = obs.mask.ravel(order="F")
    coeff = lam / (2.0 * math.sqrt(nm))
    return _vectorized_loop(None, y, n_x, n_y, observed_vec, coeff, st)
