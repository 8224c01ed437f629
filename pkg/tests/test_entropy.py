"""Entropy measures against brute-force oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest

from tsforge.features.entropy import (
    entropy,
    perm_entropy,
    sample_entropy,
    spectral_entropy,
    spectrum_entropy,
)
from tsforge.spectral import periodogram


# ---------------------------------------------------------------------------
# histogram entropy

def test_entropy_constant_is_zero():
    assert entropy(np.full(16, 3.0)) == 0.0


def test_entropy_hand_case():
    # bins over [1,3]: edges 1, 5/3, 7/3, 3 -> counts [2,1,1]
    got = entropy(np.array([1.0, 1.0, 2.0, 3.0]), bins=3, log_base="e")
    expect = -(0.5 * math.log(0.5) + 2 * 0.25 * math.log(0.25))
    assert got == pytest.approx(expect, rel=1e-12)
    assert got == pytest.approx(1.0397207708399179, rel=1e-12)


def test_entropy_uniform_hits_log_k():
    # arange(k) with k bins puts one value per bin exactly
    for k in (2, 4, 8, 16):
        got = entropy(np.arange(k, dtype=float), bins=k, log_base="e")
        assert got == pytest.approx(math.log(k), rel=1e-12)
        got2 = entropy(np.arange(k, dtype=float), bins=k)
        assert got2 == pytest.approx(math.log2(k), rel=1e-12)


def test_entropy_default_bins_sqrt_n():
    x = np.random.default_rng(41).standard_normal(100)
    assert entropy(x) == entropy(x, bins=10)
    y = np.random.default_rng(42).standard_normal(90)
    assert entropy(y) == entropy(y, bins=10)  # ceil(sqrt(90)) = 10


def test_entropy_base_choices():
    x = np.random.default_rng(43).standard_normal(64)
    assert entropy(x, bins=8) == pytest.approx(
        entropy(x, bins=8, log_base="e") / math.log(2), rel=1e-12
    )


# ---------------------------------------------------------------------------
# sample entropy

def sampen_oracle(u, m, r):
    """Quadratic brute force, unordered template pairs, no self-matches."""
    n = len(u)
    count_m = 0
    count_m1 = 0
    for i in range(n - m):
        for j in range(i + 1, n - m):
            d = max(abs(u[i + k] - u[j + k]) for k in range(m))
            if d <= r:
                count_m += 1
                if abs(u[i + m] - u[j + m]) <= r:
                    count_m1 += 1
    if count_m == 0 or count_m1 == 0:
        return float("nan")
    return -math.log(count_m1 / count_m)


def test_sampen_matches_oracle_exactly():
    rng = np.random.default_rng(44)
    for _ in range(50):
        n = int(rng.integers(10, 300))
        x = rng.standard_normal(n)
        m = int(rng.integers(1, 4))
        r = 0.2 * float(np.std(x))
        got = sample_entropy(x, m=m, r=r)
        expect = sampen_oracle(list(x), m, r)
        if math.isnan(expect):
            assert math.isnan(got)
        else:
            assert got == expect  # same float path, tolerance 0


def test_sampen_constant_is_zero():
    # every template matches every other: A == B -> -ln(1) = 0
    assert sample_entropy(np.full(50, 2.0), m=2) == 0.0


def test_sampen_periodic_alternation():
    x = np.array([1.0, 2.0] * 50)
    assert sample_entropy(x, m=2, r=0.1) == 0.0


def test_sampen_no_b_matches_undefined():
    x = np.array([0.0, 100.0, -100.0, 200.0, -200.0, 300.0])
    assert math.isnan(sample_entropy(x, m=1, r=0.1))


def test_sampen_b_without_a_undefined():
    # m=1, r=0.1: pairs (0,1) and (3,4) match at length 1 but neither
    # extends, so B=2, A=0 -> undefined
    x = np.array([0.0, 0.05, 10.0, 20.0, 20.03, 40.0])
    got = sample_entropy(x, m=1, r=0.1)
    assert math.isnan(got)
    assert math.isnan(sampen_oracle(list(x), 1, 0.1))


def test_sampen_default_r():
    rng = np.random.default_rng(45)
    x = rng.standard_normal(150)
    assert sample_entropy(x, m=2) == sample_entropy(x, m=2, r=0.2 * float(np.std(x)))


def test_sampen_validation():
    with pytest.raises(ValueError):
        sample_entropy(np.arange(10.0), m=0)
    with pytest.raises(ValueError):
        sample_entropy(np.arange(10.0), m=2, r=-0.5)
    with pytest.raises(ValueError):
        sample_entropy(np.arange(3.0), m=2)  # needs m + 2 samples


# ---------------------------------------------------------------------------
# permutation entropy

def perm_oracle(x, order, delay):
    """Exhaustive pattern enumeration with stable tie ranks."""
    n = len(x)
    patterns = {}
    count = 0
    for i in range(n - (order - 1) * delay):
        w = [x[i + k * delay] for k in range(order)]
        ranks = []
        for p in range(order):
            rank = sum(1 for q in range(order) if w[q] < w[p]) + sum(
                1 for q in range(p) if w[q] == w[p]
            )
            ranks.append(rank)
        key = tuple(ranks)
        patterns[key] = patterns.get(key, 0) + 1
        count += 1
    h = 0.0
    for c in patterns.values():
        p = c / count
        h -= p * math.log2(p)
    return h


def test_perm_entropy_hand_case():
    x = np.array([4.0, 7.0, 9.0, 10.0, 6.0, 11.0, 3.0])
    # six length-2 windows: 4 ascending, 2 descending
    got = perm_entropy(x, order=2, normalize=False)
    assert got == pytest.approx(0.9182958340544896, abs=1e-12)
    assert got == pytest.approx(0.918296, abs=1e-6)


def test_perm_entropy_monotone_is_zero():
    assert perm_entropy(np.arange(50.0), order=3, normalize=False) == 0.0
    assert perm_entropy(np.arange(50.0)[::-1].copy(), order=3, normalize=False) == 0.0


def test_perm_entropy_matches_oracle():
    rng = np.random.default_rng(46)
    for _ in range(30):
        n = int(rng.integers(20, 500))
        x = rng.standard_normal(n)
        order = int(rng.integers(2, 5))
        delay = int(rng.integers(1, 4))
        got = perm_entropy(x, order=order, delay=delay, normalize=False)
        assert got == pytest.approx(perm_oracle(list(x), order, delay), abs=1e-12)


def test_perm_entropy_ties_use_stable_ranks():
    # [2,2,1]: equal pair keeps original order -> ranks (1,2,0)
    x = np.array([2.0, 2.0, 1.0, 2.0, 2.0, 1.0])
    got = perm_entropy(x, order=3, delay=1, normalize=False)
    assert got == pytest.approx(perm_oracle(list(x), 3, 1), abs=1e-12)


def test_perm_entropy_normalized_range():
    rng = np.random.default_rng(47)
    x = rng.standard_normal(400)
    h = perm_entropy(x, order=3, normalize=True)
    assert 0.0 <= h <= 1.0
    raw = perm_entropy(x, order=3, normalize=False)
    assert h == pytest.approx(raw / math.log2(math.factorial(3)), rel=1e-12)


def test_perm_entropy_shuffled_exceeds_sorted():
    rng = np.random.default_rng(48)
    x = np.sort(rng.standard_normal(300))
    shuffled = x.copy()
    rng.shuffle(shuffled)
    assert perm_entropy(shuffled, order=3) > perm_entropy(x, order=3)


def test_perm_entropy_monotone_transform_invariant():
    # ordinal patterns depend only on ranks
    rng = np.random.default_rng(49)
    x = rng.standard_normal(200)
    assert perm_entropy(np.exp(x), order=3) == perm_entropy(x, order=3)


def test_perm_entropy_validation():
    with pytest.raises(ValueError):
        perm_entropy(np.arange(10.0), order=1)
    with pytest.raises(ValueError):
        perm_entropy(np.arange(10.0), order=3, delay=0)
    with pytest.raises(ValueError):
        perm_entropy(np.arange(4.0), order=3, delay=2)  # needs (o-1)*d + 2


# ---------------------------------------------------------------------------
# spectral entropy

def test_spectral_entropy_flat_vs_peaked():
    rng = np.random.default_rng(50)
    noise = rng.standard_normal(4096)
    t = np.arange(4096) / 128.0
    tone = np.sin(2 * np.pi * 10 * t)
    assert spectral_entropy(noise, 128.0) > spectral_entropy(tone, 128.0)


def test_spectral_entropy_normalization():
    rng = np.random.default_rng(51)
    x = rng.standard_normal(512)
    s = periodogram(x, 64.0)
    h_norm = spectrum_entropy(s, normalize=True)
    h_raw = spectrum_entropy(s, normalize=False)
    assert h_norm == pytest.approx(h_raw / math.log2(s.nbins), rel=1e-12)
    assert 0.0 < h_norm <= 1.0


def test_spectral_entropy_selector():
    rng = np.random.default_rng(52)
    x = rng.standard_normal(1024)
    h_ps = spectral_entropy(x, 100.0, spectrum="ps")
    h_w = spectral_entropy(x, 100.0, spectrum="welch")
    assert h_ps != h_w  # different estimators, same signal
    s = periodogram(x, 100.0)
    assert h_ps == spectrum_entropy(s)
