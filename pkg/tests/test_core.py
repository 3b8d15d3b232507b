import numpy as np
import pytest
from hypothesis import given, strategies as st

from faithdp import InvalidConfigError, RunConfig
from faithdp.core import density_order, density_outranks, outranks_mask


@pytest.mark.parametrize(
    "i, rho_i, j, rho_j, expected",
    [(3, 2.0, 7, 1.0, True), (3, 1.0, 7, 1.0, True), (7, 1.0, 3, 1.0, False)],
)
def test_outranks_examples(i, rho_i, j, rho_j, expected):
    assert density_outranks(i, rho_i, j, rho_j) is expected


@given(st.lists(st.integers(0, 3), min_size=2, max_size=30))
def test_outranks_is_strict_total_order(values):
    rho = np.array(values, dtype=float)
    n = len(rho)
    for i in range(n):
        assert not density_outranks(i, rho[i], i, rho[i])
        for j in range(n):
            if i != j:
                assert density_outranks(i, rho[i], j, rho[j]) != density_outranks(j, rho[j], i, rho[i])
    order = density_order(rho)
    for a, b in zip(order[:-1], order[1:]):
        assert density_outranks(a, rho[a], b, rho[b])


def test_outranks_mask_matches_scalar():
    rng = np.random.default_rng(0)
    rho = rng.integers(0, 4, 40).astype(float)
    idx = np.arange(40)
    for p in range(40):
        expected = [density_outranks(c, rho[c], p, rho[p]) for c in idx]
        assert outranks_mask(idx, rho, p).tolist() == expected


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kernel": "epanechnikov"},
        {"dc": 0.0},
        {"dc": -1.0},
        {"dc_percentile": 0},
        {"dc_percentile": 100},
        {"K": 0},
        {"batch_size": 0},
        {"workers": 0},
        {"n_clusters": 0},
    ],
)
def test_runconfig_rejects(kwargs):
    with pytest.raises(InvalidConfigError):
        RunConfig(**kwargs)


def test_runconfig_size_checks():
    cfg = RunConfig(K=10, n_clusters=4)
    cfg.check_n(11)
    with pytest.raises(InvalidConfigError):
        cfg.check_n(10)
    with pytest.raises(InvalidConfigError):
        RunConfig(n_clusters=5, K=1).check_n(4)


def test_runconfig_defaults():
    cfg = RunConfig()
    assert (cfg.K, cfg.batch_size, cfg.dc_percentile, cfg.kernel) == (16, 1024, 2.0, "gaussian")
    assert cfg.effective_workers(10) == 1  # a single batch
    assert RunConfig(workers=8, batch_size=10).effective_workers(35) == 4
