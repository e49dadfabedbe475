"""Frequency recovery from PSD Toeplitz structure.

One-level: Vandermonde decomposition T = A diag(p) A^H via a matrix pencil on
the dominant eigen-subspace (shift invariance), powers by nonnegative least
squares. Two-level: a MUSIC spectrum over the (f_x, f_y) torus with parabolic
peak refinement, used by the vectorized baseline.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .exceptions import OrderError
from .model import ComplexMat, steering_matrix
from .toeplitz import TwoLevelToeplitz, two_level_materialize

POWER_FLOOR = 1e-12
UNIT_CIRCLE_SLACK = 0.1


@dataclass(frozen=True)
class VandermondeFactorization:
    """T = sum_k powers[k] a(freqs[k]) a(freqs[k])^H, freqs sorted ascending."""

    freqs: np.ndarray
    powers: np.ndarray
    order: int


def estimate_order(t: ComplexMat, rel_threshold: float = 1e-4) -> int:
    """Count eigenvalues above rel_threshold times the largest one."""
    w = np.linalg.eigvalsh(0.5 * (t + t.conj().T))
    top = w[-1]
    if top <= 0:
        return 0
    return int(np.sum(w > rel_threshold * top))


def vandermonde_decompose(t: ComplexMat, order: int) -> VandermondeFactorization:
    """Recover frequencies and powers of a PSD Hermitian Toeplitz matrix.

    Frequencies come from the eigenvalue angles of the least-squares rotation
    between the first and last n-1 rows of the dominant order-dimensional
    eigenbasis; powers from NNLS against the recovered steering outer
    products, floored at 1e-12.
    """
    n = t.shape[0]
    if order == 0:
        return VandermondeFactorization(np.array([]), np.array([]), 0)
    if order > n - 1:
        raise OrderError(order, n - 1)
    th = 0.5 * (t + t.conj().T)
    w, e = np.linalg.eigh(th)
    w = w[::-1]
    e = e[:, ::-1]
    detected = int(np.sum(w > max(1e-12 * max(w[0], 0), n * 1e-14)))
    if order > detected:
        raise OrderError(order, detected)
    es = e[:, :order]
    phi = np.linalg.lstsq(es[:-1, :], es[1:, :], rcond=None)[0]
    ev = np.linalg.eigvals(phi)
    if np.any(np.abs(np.abs(ev) - 1.0) > UNIT_CIRCLE_SLACK):
        warnings.warn("pencil eigenvalues far from the unit circle; "
                      "subspace looks noise degraded", RuntimeWarning,
                      stacklevel=2)
    freqs = np.sort(np.mod(np.angle(ev) / (2 * np.pi), 1.0))
    a = steering_matrix(n, freqs)
    cols = np.einsum("ik,jk->ijk", a, a.conj()).reshape(n * n, order)
    design = np.vstack([cols.real, cols.imag])
    target = np.concatenate([th.ravel().real, th.ravel().imag])
    powers, _ = scipy.optimize.nnls(design, target)
    powers = np.maximum(powers, POWER_FLOOR)
    return VandermondeFactorization(freqs, powers, order)


def reconstruct(fact: VandermondeFactorization, n: int) -> ComplexMat:
    """Materialize sum_k p_k a(f_k) a(f_k)^H."""
    a = steering_matrix(n, fact.freqs) if fact.order else np.zeros((n, 0))
    return (a * fact.powers) @ a.conj().T


def _signal_projection_power(es: np.ndarray, n_x: int, n_y: int,
                             grid_x: int, grid_y: int) -> np.ndarray:
    # sum over signal eigenvectors of |a(f)^H e|^2 on the grid, via FFTs;
    # a(f) = conj(a_M(f_y)) kron a_N(f_x), so e reshapes to (n_y, n_x)
    out = np.zeros((grid_x, grid_y))
    for col in range(es.shape[1]):
        c = np.conj(es[:, col].reshape(n_y, n_x).T)
        f = np.fft.fft(c, n=grid_y, axis=1)
        f = np.fft.ifft(f, n=grid_x, axis=0) * grid_x
        out += np.abs(f) ** 2
    return out


def music2d_spectrum(t2: TwoLevelToeplitz, order: int,
                     grid_x: int, grid_y: int) -> np.ndarray:
    """MUSIC pseudo-spectrum 1 / ||E_noise^H a(f_x, f_y)||^2 on a torus grid."""
    n_x, n_y = t2.n_x, t2.n_y
    nm = n_x * n_y
    if not 0 < order < nm:
        raise ValueError(f"order must be in 1..{nm - 1}, got {order}")
    w, e = np.linalg.eigh(two_level_materialize(t2))
    if order < nm and w[nm - order - 1] > 0.5 * w[nm - order]:
        warnings.warn("weak eigengap between signal and noise subspaces",
                      RuntimeWarning, stacklevel=2)
    es = e[:, nm - order:]
    # ||a||^2 = n_x n_y, so the noise-space power is the complement
    denom = np.maximum(nm - _signal_projection_power(es, n_x, n_y, grid_x, grid_y),
                       1e-300)
    return 1.0 / denom


def music2d_peaks(t2: TwoLevelToeplitz, order: int,
                  grid_x: int = 512, grid_y: int = 512,
                  refine: bool = True) -> list[tuple[float, float]]:
    """Top `order` local maxima of the MUSIC spectrum, parabolically refined."""
    spec = music2d_spectrum(t2, order, grid_x, grid_y)
    denom = 1.0 / spec
    neigh = np.stack([np.roll(np.roll(spec, di, 0), dj, 1)
                      for di in (-1, 0, 1) for dj in (-1, 0, 1)
                      if (di, dj) != (0, 0)])
    flat = np.where((spec >= neigh.max(axis=0)).ravel())[0]
    picks = flat[np.argsort(spec.ravel()[flat])[::-1][:order]]
    out = []
    for p in picks:
        i, j = divmod(int(p), grid_y)
        fx, fy = i / grid_x, j / grid_y
        if refine:
            dm, d0, dp = denom[(i - 1) % grid_x, j], denom[i, j], denom[(i + 1) % grid_x, j]
            den = dm - 2 * d0 + dp
            if den > 0:
                fx = (i + 0.5 * (dm - dp) / den) / grid_x % 1.0
            dm, d0, dp = denom[i, (j - 1) % grid_y], denom[i, j], denom[i, (j + 1) % grid_y]
            den = dm - 2 * d0 + dp
            if den > 0:
                fy = (j + 0.5 * (dm - dp) / den) / grid_y % 1.0
        out.append((float(fx), float(fy)))
    return out
