"""Dual certificate checks for claimed recoveries.

The dual polynomial Q(f_x, f_y) = a_x(f_x)^H Q a_y(f_y) of a valid certificate
interpolates the amplitude signs on the support and stays strictly inside the
unit disk away from it. certify() checks both on a torus grid, excluding a
wrap-distance box around each support point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ComplexMat, SourceSet, steering_vector, wrap_distance

MIN_GRID = 64


@dataclass(frozen=True)
class CertificateReport:
    interpolation_errors: list[float]
    max_offgrid_modulus: float
    grid_density: tuple[int, int]
    exclusion_radius: float
    passed: bool


def dual_poly_eval(q: ComplexMat, f_x: float, f_y: float) -> complex:
    """a_x(f_x)^H Q a_y(f_y) at a single point."""
    n_x, n_y = q.shape
    return complex(steering_vector(n_x, f_x).conj() @ q @ steering_vector(n_y, f_y))


def dual_poly_grid(q: ComplexMat, grid_x: int, grid_y: int) -> ComplexMat:
    """Evaluate the dual polynomial on a (grid_x, grid_y) torus grid via FFTs.

    Entry [i, j] equals dual_poly_eval(q, i / grid_x, j / grid_y).
    """
    n_x, n_y = q.shape
    if grid_x < n_x or grid_y < n_y:
        raise ValueError("grid must be at least the matrix dimensions")
    # a_x^H q sums e^{-2 pi i n f_x} q[n, m]: a forward FFT over axis 0;
    # the a_y factor sums e^{+2 pi i m f_y}: an inverse FFT times grid_y.
    g = np.fft.fft(q, n=grid_x, axis=0)
    return np.fft.ifft(g, n=grid_y, axis=1) * grid_y


def certify(q: ComplexMat, support: SourceSet,
            grid: tuple[int, int] = (1024, 1024),
            tol: float = 1e-3) -> CertificateReport:
    """Check interpolation on the support and boundedness away from it.

    Passes when |Q(f_k) - sign(s_k)| <= tol for every support point and the
    grid modulus outside wrap-distance 1 / (4 max(n_x, n_y)) boxes around the
    support stays below 1 + tol.
    """
    gx, gy = grid
    if gx < MIN_GRID or gy < MIN_GRID:
        raise ValueError(f"grid must be at least {MIN_GRID} per axis")
    n_x, n_y = q.shape
    interp = []
    for src in support.sources:
        val = dual_poly_eval(q, src.f_x, src.f_y)
        sign = src.amp / abs(src.amp)
        interp.append(float(abs(val - sign)))
    radius = 1.0 / (4.0 * max(n_x, n_y))
    mod = np.abs(dual_poly_grid(q, gx, gy))
    fx = np.arange(gx) / gx
    fy = np.arange(gy) / gy
    keep = np.ones((gx, gy), dtype=bool)
    for src in support.sources:
        near_x = wrap_distance(fx, src.f_x) <= radius
        near_y = wrap_distance(fy, src.f_y) <= radius
        keep &= ~(near_x[:, None] & near_y[None, :])
    max_off = float(mod[keep].max()) if keep.any() else 0.0
    passed = all(e <= tol for e in interp) and max_off < 1.0 + tol
    return CertificateReport(interp, max_off, (gx, gy), radius, passed)
