"""Hermitian Toeplitz structures: one-level and two-level (block Toeplitz of
Toeplitz blocks), their materialization, and least-squares projections onto
the structured subspace. The projections are the adjoint-averaging primitives
the splitting solver alternates with.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .model import ComplexMat


@dataclass(frozen=True)
class HermToeplitz:
    """One-level Hermitian Toeplitz matrix stored as its first row u.

    T[i, j] = u[j-i] for j >= i and conj(u[i-j]) below the diagonal. The
    imaginary part of u[0] is ignored when materializing.
    """

    first_row: np.ndarray

    def __len__(self) -> int:
        return len(self.first_row)


@dataclass(frozen=True)
class TwoLevelToeplitz:
    """Two-level Hermitian Toeplitz matrix stored as a half lag table.

    lags[k_x + n_x - 1, k_y] holds t(k_x, k_y) for k_x in -(n_x-1)..(n_x-1)
    and k_y in 0..(n_y-1); Hermitian symmetry t(-k_x, -k_y) = conj(t(k_x, k_y))
    closes the other half. The materialized matrix acts on vec(X) stacked
    column-major (x-index fastest).
    """

    lags: np.ndarray
    n_x: int
    n_y: int

    def __post_init__(self):
        expect = (2 * self.n_x - 1, self.n_y)
        if self.lags.shape != expect:
            raise ValueError(f"lag table shape {self.lags.shape}, expected {expect}")


def toeplitz_materialize(u: HermToeplitz) -> ComplexMat:
    """Dense Hermitian Toeplitz matrix from its first row."""
    row = np.asarray(u.first_row, dtype=complex)
    col = np.conj(row).copy()
    col[0] = row[0].real
    return sla.toeplitz(col, row)


def toeplitz_adjoint_project(h: ComplexMat) -> HermToeplitz:
    """Least-squares projection of a square matrix onto Hermitian Toeplitz.

    Averages each diagonal of the Hermitian part of h; returns the first row.
    """
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError(f"square matrix required, got {h.shape}")
    hh = 0.5 * (h + h.conj().T)
    u = np.array([np.mean(np.diagonal(hh, offset=k)) for k in range(n)])
    return HermToeplitz(u)


def toeplitz_trace(u: HermToeplitz) -> float:
    return len(u) * float(np.real(u.first_row[0]))


def _block(lags: np.ndarray, n_x: int, k_y: int) -> ComplexMat:
    # one-level Toeplitz block for y-lag k_y >= 0: entry (n, n') = t(n-n', k_y)
    col = lags[n_x - 1:, k_y]
    row = lags[n_x - 1::-1, k_y]
    return sla.toeplitz(col, row)


def two_level_materialize(t2: TwoLevelToeplitz) -> ComplexMat:
    """Dense (n_x*n_y) x (n_x*n_y) matrix with Toeplitz blocks in Toeplitz layout."""
    n, m = t2.n_x, t2.n_y
    blocks = [_block(t2.lags, n, ky) for ky in range(m)]
    out = np.empty((n * m, n * m), dtype=complex)
    for a in range(m):
        for b in range(m):
            ky = a - b
            blk = blocks[ky] if ky >= 0 else blocks[-ky].conj().T
            out[a * n:(a + 1) * n, b * n:(b + 1) * n] = blk
    return out


def two_level_adjoint_project(h: ComplexMat, n_x: int, n_y: int) -> TwoLevelToeplitz:
    """Least-squares projection onto the two-level Hermitian Toeplitz subspace."""
    if h.shape != (n_x * n_y, n_x * n_y):
        raise ValueError(f"expected {(n_x * n_y,) * 2} matrix, got {h.shape}")
    hh = 0.5 * (h + h.conj().T)
    lags = np.zeros((2 * n_x - 1, n_y), dtype=complex)
    for ky in range(n_y):
        cnt = n_y - ky
        avg = np.zeros((n_x, n_x), dtype=complex)
        for b in range(cnt):
            a = b + ky
            avg += hh[a * n_x:(a + 1) * n_x, b * n_x:(b + 1) * n_x]
        avg /= cnt
        for kx in range(-(n_x - 1), n_x):
            # diagonal at offset -kx holds entries with n - n' = kx
            lags[kx + n_x - 1, ky] = np.mean(np.diagonal(avg, offset=-kx))
    return TwoLevelToeplitz(lags, n_x, n_y)


def two_level_trace(t2: TwoLevelToeplitz) -> float:
    return t2.n_x * t2.n_y * float(np.real(t2.lags[t2.n_x - 1, 0]))


def two_level_from_sources(freqs_x, freqs_y, powers, n_x: int, n_y: int) -> TwoLevelToeplitz:
    """Lag table of sum_k p_k e^(j2pi fx kx) e^(-j2pi fy ky); test and synthesis helper."""
    kx = np.arange(-(n_x - 1), n_x)[:, None]
    ky = np.arange(n_y)[None, :]
    lags = np.zeros((2 * n_x - 1, n_y), dtype=complex)
    for fx, fy, p in zip(np.atleast_1d(freqs_x), np.atleast_1d(freqs_y),
                         np.atleast_1d(powers)):
        lags += p * np.exp(2j * np.pi * fx * kx) * np.exp(-2j * np.pi * fy * ky)
    return TwoLevelToeplitz(lags, n_x, n_y)
