import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anm2d.exceptions import RankDeficiencyError
from anm2d.model import ArrayGeometry, noise_sigma
from anm2d.pairing import pair_angles, resolve_collisions
from anm2d.pipeline import estimate_decoupled
from anm2d.scenario import random_scenario, realize
from anm2d.solvers import lambda_heuristic

from helpers import match_error


def build(n_x, n_y, fx, fy, s):
    ax = np.exp(2j * np.pi * np.outer(np.arange(n_x), fx))
    ay = np.exp(2j * np.pi * np.outer(np.arange(n_y), fy))
    return (ax * np.asarray(s)) @ ay.conj().T


def witness_powers(s, n_x, n_y):
    # diagonal of the x-side Toeplitz factor at the SDP optimum
    return np.abs(np.asarray(s)) * np.sqrt(n_y / n_x)


def test_single_source():
    x = build(8, 8, [0.3], [0.7], [2.0 * np.exp(0.5j)])
    est = pair_angles(x, np.array([0.3]), witness_powers([2.0], 8, 8),
                      np.array([0.7]))
    assert len(est) == 1
    fx, fy, amp = est.pairs[0]
    assert (fx, fy) == (0.3, 0.7)
    assert amp == pytest.approx(2.0 * np.exp(0.5j), abs=1e-10)
    assert est.match_scores[0] == pytest.approx(1.0, abs=1e-12)


def test_four_sources_square():
    fx = [0.05, 0.3, 0.55, 0.8]
    fy = [0.6, 0.1, 0.85, 0.35]
    s = [1.0, 2.0 * np.exp(1.0j), 0.5 * np.exp(-2.0j), 1.5]
    x = build(16, 16, fx, fy, s)
    est = pair_angles(x, np.array(fx), witness_powers(s, 16, 16), np.array(fy))
    assert [(p[0], p[1]) for p in est.pairs] == list(zip(fx, fy))
    assert np.allclose(est.amps, s, atol=1e-9)


def test_pairing_invariant_to_input_order():
    fx = np.array([0.05, 0.3, 0.55, 0.8])
    fy = np.array([0.6, 0.1, 0.85, 0.35])
    s = np.array([1.0, 2.0, 0.5, 1.5])
    x = build(16, 16, fx, fy, s)
    base = pair_angles(x, fx, witness_powers(s, 16, 16), fy)
    rng = np.random.default_rng(0)
    for _ in range(5):
        px = rng.permutation(4)
        py = rng.permutation(4)
        est = pair_angles(x, fx[px], witness_powers(s, 16, 16)[px], fy[py])
        assert [(p[0], p[1]) for p in est.pairs] == \
            [(p[0], p[1]) for p in base.pairs]


def test_three_sources_vs_brute_force():
    # the returned pairing is the correct one among all permutations
    rng = np.random.default_rng(5)
    for _ in range(10):
        fx = np.sort(rng.random(3))
        fy = rng.random(3)
        if min(np.diff(np.sort(fx))) < 0.1 or min(np.diff(np.sort(fy))) < 0.1:
            continue
        s = rng.uniform(0.5, 2, 3) * np.exp(2j * np.pi * rng.random(3))
        x = build(12, 12, fx, fy, s)
        est = pair_angles(x, fx, witness_powers(s, 12, 12), fy)
        got = [(p[0], p[1]) for p in est.pairs]
        truth = set(zip(fx, fy))
        assert set(got) == truth
        # truth is the unique permutation consistent with the data
        for perm in itertools.permutations(range(3)):
            alt = set(zip(fx, fy[list(perm)]))
            if alt == truth:
                continue
            resid = np.linalg.norm(
                build(12, 12, fx, [fy[p] for p in perm], s) - x)
            assert resid > 1e-6


def test_global_phase_invariance():
    fx = np.array([0.1, 0.6])
    fy = np.array([0.4, 0.9])
    s = np.array([1.0, 1.8])
    x0 = build(10, 10, fx, fy, s)
    e0 = pair_angles(x0, fx, witness_powers(s, 10, 10), fy)
    phase = np.exp(1.3j)
    e1 = pair_angles(phase * x0, fx, witness_powers(s, 10, 10), fy)
    assert [(p[0], p[1]) for p in e0.pairs] == [(p[0], p[1]) for p in e1.pairs]
    assert np.allclose(e1.amps, phase * e0.amps, atol=1e-9)


def test_rank_deficient_freqs_raise():
    fx = np.array([0.3, 0.3 + 1e-14])
    fy = np.array([0.1, 0.8])
    x = build(8, 8, fx, fy, [1.0, 1.0])
    with pytest.raises(RankDeficiencyError):
        pair_angles(x, fx, np.array([1.0, 1.0]), fy)


def test_length_mismatch():
    x = np.ones((4, 4), complex)
    with pytest.raises(ValueError):
        pair_angles(x, np.array([0.1]), np.array([1.0]), np.array([0.1, 0.2]))
    with pytest.raises(ValueError):
        pair_angles(x, np.array([0.1]), np.array([1.0, 2.0]), np.array([0.1]))


def test_empty_input():
    est = pair_angles(np.ones((4, 4), complex), np.array([]), np.array([]),
                      np.array([]))
    assert len(est) == 0


def test_resolve_collisions_example():
    # two rows claim column 1; the higher score keeps it
    scores = np.array([[0.2, 0.9], [0.3, 0.6]])
    picks = [(0, 1, 0.9), (1, 1, 0.6)]
    assert resolve_collisions(picks, scores) == [(0, 1), (1, 0)]


def test_resolve_collisions_no_matrix():
    picks = [(0, 0, 0.5), (1, 0, 0.4)]
    assert resolve_collisions(picks, None) == [(0, 0), (1, 1)]


@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 6))
@settings(max_examples=50)
def test_resolve_collisions_bijection(seed, k):
    rng = np.random.default_rng(seed)
    scores = rng.random((k, k))
    picks = [(i, int(np.argmax(scores[i])), float(scores[i].max()))
             for i in range(k)]
    out = resolve_collisions(picks, scores)
    rows = [r for r, _ in out]
    cols = [c for _, c in out]
    assert sorted(rows) == list(range(k))
    assert sorted(cols) == list(range(k))


def test_noisy_pairing_accuracy():
    # SNR 20 dB end-to-end pairing stays correct across trials
    correct = 0
    trials = 20
    for t in range(trials):
        sc = random_scenario(ArrayGeometry(16, 16), 4, 20.0, seed=300 + t)
        x, y = realize(sc)
        lam = lambda_heuristic(noise_sigma(x, 20.0), 16, 16)
        res = estimate_decoupled(y, lam=lam, order=4)
        truth = list(zip(sc.sources.freqs_x, sc.sources.freqs_y))
        est = [(p[0], p[1]) for p in res.estimate.pairs]
        if match_error(est, truth) < 0.01:
            correct += 1
    assert correct == trials
