"""Automatic pairing of per-axis frequency estimates.

Given the recovered x-axis frequencies and powers together with the data
matrix, each x-frequency's row of the back-projected coefficient matrix is a
scaled conjugate y-steering vector; normalized correlation against the
candidate y-frequencies decides the pairing, with greedy collision resolution
by descending score and an assignment-problem fallback.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .exceptions import RankDeficiencyError
from .model import ComplexMat, steering_matrix

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class PairedEstimate:
    """Paired (f_x, f_y, amplitude) triples sorted by f_x, with match scores."""

    pairs: list[tuple[float, float, complex]]
    match_scores: list[float]

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def freqs_x(self) -> np.ndarray:
        return np.array([p[0] for p in self.pairs])

    @property
    def freqs_y(self) -> np.ndarray:
        return np.array([p[1] for p in self.pairs])

    @property
    def amps(self) -> np.ndarray:
        return np.array([p[2] for p in self.pairs])


def resolve_collisions(assignment: list[tuple[int, int, float]],
                       score_matrix: np.ndarray | None = None,
                       ) -> list[tuple[int, int]]:
    """Turn per-row argmax picks into a bijection.

    assignment holds (row, col, score) triples where several rows may claim
    the same column. Rows keep their claim in descending score order; displaced
    rows take their best unclaimed column (by score_matrix when given, lowest
    index otherwise). Any leftover degeneracy falls through to an optimal
    assignment on the score matrix.
    """
    order = sorted(range(len(assignment)),
                   key=lambda i: (-assignment[i][2], assignment[i][0]))
    claimed: set[int] = set()
    resolved: dict[int, int] = {}
    displaced: list[int] = []
    for i in order:
        row, col, _ = assignment[i]
        if col not in claimed:
            claimed.add(col)
            resolved[row] = col
        else:
            displaced.append(i)
    n_cols = score_matrix.shape[1] if score_matrix is not None else len(assignment)
    free = [c for c in range(n_cols) if c not in claimed]
    for i in displaced:
        row = assignment[i][0]
        if not free:
            break
        if score_matrix is not None:
            pick = max(free, key=lambda c: score_matrix[row, c])
        else:
            pick = free[0]
        free.remove(pick)
        claimed.add(pick)
        resolved[row] = pick
    leftover = [assignment[i][0] for i in order if assignment[i][0] not in resolved]
    if leftover:
        if score_matrix is None:
            raise ValueError("cannot resolve collisions without a score matrix")
        r, c = scipy.optimize.linear_sum_assignment(-score_matrix)
        return [(int(a), int(b)) for a, b in zip(r, c)]
    return sorted((row, col) for row, col in resolved.items())


def pair_angles(x_hat: ComplexMat, freqs_x: np.ndarray, powers_x: np.ndarray,
                freqs_y: np.ndarray) -> PairedEstimate:
    """Pair x- and y-axis frequencies through the data matrix.

    With x_hat = A_x diag(s) B_y^H, the rows of pinv(A_x) x_hat / powers_x are
    scaled conjugate y-steering vectors; row j matched to candidate k scores
    |corr| / (||a_y,k|| ||row_j||) in [0, 1]. Each y-candidate takes its best
    row, collisions resolved greedily. Amplitudes are powers_x[j] rotated by
    the matched correlation phase.
    """
    k = len(freqs_x)
    if len(freqs_y) != k:
        raise ValueError("freqs_x and freqs_y must have the same length")
    if len(powers_x) != k:
        raise ValueError("powers_x must match freqs_x")
    if k == 0:
        return PairedEstimate([], [])
    n_x, n_y = x_hat.shape
    a = steering_matrix(n_x, freqs_x)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= RANK_RTOL * sv[0]:
        raise RankDeficiencyError(
            "x-axis steering matrix is numerically rank deficient; "
            "frequencies too close to pair")
    v = np.linalg.pinv(a, rcond=RANK_RTOL) @ x_hat / powers_x[:, None]
    b = steering_matrix(n_y, freqs_y)
    # corr[k, j] = <conj(row j), a_y(f_k)> with the conjugation folded in
    corr = (v @ b).T
    row_norms = np.linalg.norm(v, axis=1)
    scores = np.abs(corr) / np.maximum(np.sqrt(n_y) * row_norms[None, :], 1e-300)
    best = [int(np.argmax(scores[kk])) for kk in range(k)]
    triples = [(kk, best[kk], float(scores[kk, best[kk]])) for kk in range(k)]
    matches = resolve_collisions(triples, scores)
    pairs = []
    match_scores = []
    for kk, j in matches:
        amp = powers_x[j] * np.exp(1j * np.angle(corr[kk, j]))
        pairs.append((float(freqs_x[j]), float(freqs_y[kk]), complex(amp)))
        match_scores.append(float(scores[kk, j]))
    idx = sorted(range(k), key=lambda i: pairs[i][0])
    return PairedEstimate([pairs[i] for i in idx],
                          [match_scores[i] for i in idx])
