"""Experiment scenarios: random separated source generation and JSON round trip.

Scenario files are JSON objects with fields
{n_x, n_y, sources: [{f_x, f_y, amp_re, amp_im}], snr_db, mask, seed};
snr_db and mask may be null (noise free, fully observed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import serialize
from .exceptions import ScenarioError
from .model import (ArrayGeometry, ComplexMat, ObservationModel, Source,
                    SourceSet, add_noise, apply_observation,
                    separation_threshold, synthesize)


@dataclass(frozen=True)
class Scenario:
    geom: ArrayGeometry
    sources: SourceSet
    snr_db: float | None
    mask: np.ndarray | None
    seed: int

    @property
    def observation(self) -> ObservationModel:
        if self.mask is None:
            return ObservationModel("full")
        return ObservationModel("mask", self.mask)


def separated_frequencies(rng: np.random.Generator, k: int, min_sep: float) -> np.ndarray:
    """k frequencies on the circle with pairwise wrap distance >= min_sep."""
    if k == 1:
        return np.array([rng.uniform(0, 1)])
    slack = 1.0 - k * min_sep
    if slack <= 0:
        raise ScenarioError(
            f"cannot place {k} frequencies with min separation {min_sep:.4f}"
        )
    gaps = min_sep + rng.dirichlet(np.ones(k)) * slack
    f = np.mod(rng.uniform(0, 1) + np.cumsum(gaps), 1.0)
    return rng.permutation(f)


def default_min_separation(n: int, k: int = 1) -> float:
    """Generator default: half the sufficient bound, capped for feasibility.

    The sufficient separation bound is conservative (and for small n or
    several sources infeasible on the circle: k points can be at most 1/k
    apart pairwise). Half the bound keeps exact recovery empirically while
    the 3/(4k) cap leaves k sources a total placement slack of 1/4.
    """
    if (n - 1) // 4 == 0:
        bound = 1.5 / n
    else:
        bound = separation_threshold(n) / 2
    if k > 1:
        bound = min(bound, 3.0 / (4.0 * k))
    return bound


def random_scenario(geom: ArrayGeometry, k: int, snr_db: float | None, seed: int,
                    min_sep_x: float | None = None,
                    min_sep_y: float | None = None,
                    mask: np.ndarray | None = None) -> Scenario:
    """Random scenario with separated frequencies and amplitudes in [0.5, 2]."""
    rng = np.random.default_rng(seed)
    sx = default_min_separation(geom.n_x, k) if min_sep_x is None else min_sep_x
    sy = default_min_separation(geom.n_y, k) if min_sep_y is None else min_sep_y
    fx = separated_frequencies(rng, k, sx)
    fy = separated_frequencies(rng, k, sy)
    amps = rng.uniform(0.5, 2, k) * np.exp(2j * np.pi * rng.uniform(0, 1, k))
    srcs = SourceSet(tuple(Source(float(a), float(b), complex(c))
                           for a, b, c in zip(fx, fy, amps)))
    return Scenario(geom, srcs, snr_db, mask, seed)


def realize(sc: Scenario) -> tuple[ComplexMat, ComplexMat]:
    """Synthesize the scenario: returns (clean X, observed Y)."""
    x = synthesize(sc.geom, sc.sources)
    y = x if sc.snr_db is None else add_noise(x, sc.snr_db, sc.seed)
    return x, apply_observation(y, sc.observation)


def scenario_to_dict(sc: Scenario) -> dict:
    return {
        "n_x": sc.geom.n_x,
        "n_y": sc.geom.n_y,
        "sources": [
            {"f_x": s.f_x, "f_y": s.f_y,
             "amp_re": s.amp.real, "amp_im": s.amp.imag}
            for s in sc.sources.sources
        ],
        "snr_db": sc.snr_db,
        "mask": None if sc.mask is None else sc.mask.astype(int).tolist(),
        "seed": sc.seed,
    }


def _require(d: dict, field: str, ctx: str):
    if field not in d:
        raise ScenarioError(f"missing field '{field}' in {ctx}")
    return d[field]


def scenario_from_dict(d: dict) -> Scenario:
    if not isinstance(d, dict):
        raise ScenarioError("scenario must be a JSON object")
    n_x = _require(d, "n_x", "scenario")
    n_y = _require(d, "n_y", "scenario")
    if not (isinstance(n_x, int) and isinstance(n_y, int)):
        raise ScenarioError("fields 'n_x' and 'n_y' must be integers")
    raw_sources = _require(d, "sources", "scenario")
    if not isinstance(raw_sources, list) or not raw_sources:
        raise ScenarioError("field 'sources' must be a nonempty list")
    sources = []
    for i, s in enumerate(raw_sources):
        ctx = f"sources[{i}]"
        f_x = _require(s, "f_x", ctx)
        f_y = _require(s, "f_y", ctx)
        amp = complex(_require(s, "amp_re", ctx), _require(s, "amp_im", ctx))
        try:
            sources.append(Source(float(f_x), float(f_y), amp))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid source in {ctx}: {exc}") from exc
    snr_db = d.get("snr_db")
    if snr_db is not None:
        snr_db = float(snr_db)
    mask = d.get("mask")
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != (n_x, n_y):
            raise ScenarioError(
                f"mask shape {mask.shape} does not match expected ({n_x}, {n_y})"
            )
    seed = int(d.get("seed", 0))
    try:
        geom = ArrayGeometry(n_x, n_y)
        srcs = SourceSet(tuple(sources))
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    return Scenario(geom, srcs, snr_db, mask, seed)


def load_scenario(path) -> Scenario:
    try:
        raw = serialize.read_json(path)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")
    except ValueError as exc:
        raise ScenarioError(f"scenario file {path} is not valid JSON: {exc}")
    return scenario_from_dict(raw)


def save_scenario(path, sc: Scenario) -> None:
    serialize.write_json(path, scenario_to_dict(sc))
