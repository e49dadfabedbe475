"""Array signal model: steering vectors, snapshot synthesis, separation checks.

Frequencies are normalized spatial frequencies f in [0, 1), the generator of
the Vandermonde phase exp(j*2*pi*f). Under half-wavelength element spacing a
physical angle theta maps to f = mod(sin(theta)/2, 1); see angle_to_frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateApertureError

# Dense complex matrices are plain numpy arrays throughout.
ComplexMat = np.ndarray

SEPARATION_CONSTANT = 1.19


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform rectangular array with n_x by n_y elements."""

    n_x: int
    n_y: int

    def __post_init__(self):
        if self.n_x < 2 or self.n_y < 2:
            raise ValueError(f"array must be at least 2x2, got {self.n_x}x{self.n_y}")


@dataclass(frozen=True)
class Source:
    """Single far-field source: frequency pair plus complex amplitude."""

    f_x: float
    f_y: float
    amp: complex

    def __post_init__(self):
        if not (0 <= self.f_x < 1 and 0 <= self.f_y < 1):
            raise ValueError(f"frequencies must lie in [0,1), got ({self.f_x}, {self.f_y})")


@dataclass(frozen=True)
class SourceSet:
    """Ordered collection of sources; ground truth and estimates share this shape."""

    sources: tuple[Source, ...]

    def __post_init__(self):
        pairs = [(s.f_x, s.f_y) for s in self.sources]
        if len(set(pairs)) != len(pairs):
            raise ValueError("all (f_x, f_y) pairs must be distinct")

    def __len__(self) -> int:
        return len(self.sources)

    @property
    def freqs_x(self) -> np.ndarray:
        return np.array([s.f_x for s in self.sources])

    @property
    def freqs_y(self) -> np.ndarray:
        return np.array([s.f_y for s in self.sources])

    @property
    def amps(self) -> np.ndarray:
        return np.array([s.amp for s in self.sources], dtype=complex)


@dataclass(frozen=True)
class ObservationModel:
    """Entrywise observation operator: full, or a boolean keep-mask."""

    kind: str = "full"
    mask: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.kind not in ("full", "mask"):
            raise ValueError(f"kind must be 'full' or 'mask', got {self.kind!r}")
        if self.kind == "mask":
            if self.mask is None or not np.any(self.mask):
                raise ValueError("mask observation needs at least one observed entry")


def angle_to_frequency(theta: float) -> float:
    """Map a physical angle (radians, half-wavelength spacing) to f in [0,1)."""
    return math.sin(theta) / 2 % 1.0


def steering_vector(n: int, f: float) -> np.ndarray:
    """Vandermonde response vector: entry i is exp(j*2*pi*f*i), i = 0..n-1."""
    return np.exp(2j * np.pi * f * np.arange(n))


def steering_matrix(n: int, freqs) -> ComplexMat:
    """n x K matrix whose column k is steering_vector(n, freqs[k])."""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    return np.exp(2j * np.pi * np.outer(np.arange(n), freqs))


def synthesize(geom: ArrayGeometry, srcs: SourceSet) -> ComplexMat:
    """Noise-free snapshot X = sum_k amp_k a(n_x, f_xk) a(n_y, f_yk)^H."""
    a = steering_matrix(geom.n_x, srcs.freqs_x)
    b = steering_matrix(geom.n_y, srcs.freqs_y)
    return (a * srcs.amps) @ b.conj().T


def add_noise(x: ComplexMat, snr_db: float, seed: int) -> ComplexMat:
    """Add circular complex Gaussian noise at the requested SNR.

    SNR is defined as ||X||_F^2 over the expected noise Frobenius power,
    10^(snr_db/10). Deterministic for a fixed seed.
    """
    if not np.isfinite(snr_db):
        raise ValueError(f"snr_db must be finite, got {snr_db}")
    sig_power = np.linalg.norm(x) ** 2
    if sig_power == 0:
        raise ValueError("cannot set an SNR for an all-zero snapshot")
    # per-entry complex variance such that E||W||_F^2 = ||X||_F^2 / 10^(snr/10)
    var = sig_power / (x.size * 10 ** (snr_db / 10))
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    return x + np.sqrt(var / 2) * w


def noise_sigma(x: ComplexMat, snr_db: float) -> float:
    """Per-entry noise standard deviation implied by add_noise at this SNR."""
    return float(np.linalg.norm(x) / np.sqrt(x.size * 10 ** (snr_db / 10)))


def apply_observation(x: ComplexMat, obs: ObservationModel) -> ComplexMat:
    """Project onto observed entries: identity for full, zero-fill for mask."""
    if obs.kind == "full":
        return x
    if obs.mask.shape != x.shape:
        raise ValueError(f"mask shape {obs.mask.shape} does not match data {x.shape}")
    return np.where(obs.mask, x, 0)


def wrap_distance(a, b):
    """Distance on the unit circle: min(|a-b| mod 1, 1 - |a-b| mod 1)."""
    d = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)) % 1.0
    return np.minimum(d, 1.0 - d)


def min_separations(srcs: SourceSet) -> tuple[float, float]:
    """Minimum pairwise wrap distance per dimension; (1, 1) for a single source."""
    if len(srcs) < 2:
        return (1.0, 1.0)

    def min_sep(f):
        gaps = [wrap_distance(f[i], f[j]) for i in range(len(f)) for j in range(i)]
        return float(min(gaps))

    return (min_sep(srcs.freqs_x), min_sep(srcs.freqs_y))


def separation_threshold(n: int) -> float:
    """Sufficient-recovery separation bound for an n-element dimension."""
    quarter = (n - 1) // 4
    if quarter == 0:
        raise DegenerateApertureError(f"floor((n-1)/4) = 0 for n = {n}")
    return SEPARATION_CONSTANT / quarter


def separation_ok(geom: ArrayGeometry, srcs: SourceSet) -> bool:
    """True iff both per-dimension separations meet the sufficient bound.

    The test is sufficiency only: recovery commonly succeeds well below this
    bound, which is conservative by construction.
    """
    if geom.n_x < 5 or geom.n_y < 5:
        raise DegenerateApertureError(
            f"separation test needs n >= 5 per dimension, got {geom.n_x}x{geom.n_y}"
        )
    dx, dy = min_separations(srcs)
    return dx >= separation_threshold(geom.n_x) and dy >= separation_threshold(geom.n_y)
