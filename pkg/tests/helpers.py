"""Shared test utilities."""

from __future__ import annotations

import numpy as np

from anm2d.model import wrap_distance


def pair_dist(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Chebyshev distance between frequency pairs under per-axis wrap."""
    return float(max(wrap_distance(a[0], b[0]), wrap_distance(a[1], b[1])))


def hausdorff(set_a, set_b) -> float:
    """Symmetric Hausdorff distance between two frequency-pair sets."""
    if not set_a or not set_b:
        return float("inf") if set_a or set_b else 0.0
    d_ab = max(min(pair_dist(a, b) for b in set_b) for a in set_a)
    d_ba = max(min(pair_dist(a, b) for a in set_a) for b in set_b)
    return max(d_ab, d_ba)


def match_error(est_pairs, true_pairs) -> float:
    """Max per-source wrap error after greedy nearest matching; inf on miss."""
    if len(est_pairs) != len(true_pairs):
        return float("inf")
    remaining = list(true_pairs)
    worst = 0.0
    for e in est_pairs:
        j = int(np.argmin([pair_dist(e, t) for t in remaining]))
        worst = max(worst, pair_dist(e, remaining.pop(j)))
    return worst
