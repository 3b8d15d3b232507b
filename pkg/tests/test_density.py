import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from faithdp import DegenerateDataError, InvalidConfigError
from faithdp.density import density_segment, estimate_dc
from faithdp.distances import EuclideanSource, PrecomputedSource, euclidean_block


def direct_density(X, dc, kernel):
    n = X.shape[0]
    out = []
    for i in range(n):
        d = [math.dist(X[i], X[j]) for j in range(n) if j != i]
        if kernel == "gaussian":
            out.append(math.fsum(math.exp(-((v / dc) ** 2)) for v in d))
        else:
            out.append(float(sum(v < dc for v in d)))
    return np.array(out)


def test_cutoff_line(line3):
    block = euclidean_block(line3, 0, 3)
    assert density_segment(block, 1.5, "cutoff").tolist() == [1.0, 2.0, 1.0]


def test_single_point_gaussian():
    block = euclidean_block(np.array([[3.0, 1.0]]), 0, 1)
    assert density_segment(block, 0.7, "gaussian").tolist() == [0.0]


def test_gaussian_line(line3):
    rho = density_segment(euclidean_block(line3, 0, 3), 1.0, "gaussian")
    e1, e4 = math.exp(-1), math.exp(-4)
    np.testing.assert_allclose(rho, [e1 + e4, 2 * e1, e1 + e4], rtol=1e-12)
    assert rho[0] == rho[2] < rho[1]


def test_bad_dc(line3):
    block = euclidean_block(line3, 0, 3)
    with pytest.raises(InvalidConfigError):
        density_segment(block, 0.0)


@pytest.mark.parametrize("kernel", ["gaussian", "cutoff"])
def test_segments_match_direct_summation(kernel):
    rng = np.random.default_rng(7)
    X = rng.normal(size=(300, 3))
    dc = 0.6
    src = EuclideanSource(X)
    segs = [density_segment(src.block(s, min(64, 300 - s)), dc, kernel) for s in range(0, 300, 64)]
    rho = np.concatenate(segs)
    expected = direct_density(X, dc, kernel)
    if kernel == "cutoff":
        assert np.array_equal(rho, expected)
    else:
        np.testing.assert_allclose(rho, expected, rtol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 120), st.sampled_from(["gaussian", "cutoff"]), st.integers(0, 10**6))
def test_batching_invariance(b, kernel, seed):
    X = np.random.default_rng(seed).normal(size=(120, 2))
    src = EuclideanSource(X)
    whole = density_segment(src.block(0, 120), 0.5, kernel)
    parts = np.concatenate(
        [density_segment(src.block(s, min(b, 120 - s)), 0.5, kernel) for s in range(0, 120, b)]
    )
    assert np.array_equal(whole, parts)


def test_cutoff_monotone_in_dc():
    X = np.random.default_rng(8).normal(size=(150, 2))
    block = euclidean_block(X, 0, 150)
    prev = density_segment(block, 0.05, "cutoff")
    for dc in np.linspace(0.1, 3, 12):
        cur = density_segment(block, dc, "cutoff")
        assert np.all(cur >= prev)
        prev = cur


def test_duplicates_count_each_other():
    X = np.array([[0.0], [0.0], [5.0]])
    assert density_segment(euclidean_block(X, 0, 3), 1.0, "cutoff").tolist() == [1.0, 1.0, 0.0]


def test_estimate_dc_two_points():
    src = EuclideanSource(np.array([[0.0, 0.0], [0.0, 4.0]]))
    for p in (1, 50, 99):
        assert estimate_dc(src, p, 10, 0) == 4.0


def test_estimate_dc_line_median(line3):
    # the three pairwise distances are 1, 1, 2
    assert estimate_dc(EuclideanSource(line3), 50, 10, 0) == 1.0


def test_estimate_dc_deterministic():
    src = EuclideanSource(np.random.default_rng(9).normal(size=(500, 2)))
    assert estimate_dc(src, 2.0, 50, seed=3) == estimate_dc(src, 2.0, 50, seed=3)


def test_estimate_dc_precomputed():
    D = np.array([[0.0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert estimate_dc(PrecomputedSource(D), 50, 10, 0) == 1.0


def test_estimate_dc_degenerate():
    with pytest.raises(DegenerateDataError):
        estimate_dc(EuclideanSource(np.zeros((10, 2))), 50, 10, 0)
    with pytest.raises(InvalidConfigError):
        estimate_dc(EuclideanSource(np.eye(3)), 0, 10, 0)
