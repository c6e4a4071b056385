"""
Tests for seeded channel sampling
"""

import numpy as np
import pytest
from scipy import stats

from mimorelay.core.channel import (
    LinkRole,
    SIChannelBank,
    counter_rng,
    sample_channels,
    sample_true_channels,
)


def test_shapes(make_config):
    channels = sample_channels(make_config(2, 3, 5), seed=1, trial_index=0)
    assert channels.h_hat_sr.shape == (2, 3, 5)
    assert channels.h_hat_rd.shape == (2, 3, 5)
    assert channels.h_hat_sd.shape == (2, 2, 3)
    assert channels.H_hat_rr.shape == (3, 5, 5)
    assert np.all(np.isfinite(channels.h_hat_sr))


def test_zero_variance_gives_zero_vector(make_config):
    config = make_config(1, 1, 6, psi_hat_sr=0.0)
    channels = sample_channels(config, seed=4, trial_index=0)
    assert not channels.h_hat_sr[0, 0].any()


def test_same_seed_same_channels(make_config):
    config = make_config(2, 2, 8)
    assert sample_channels(config, 7, 3) == sample_channels(config, 7, 3)
    assert sample_channels(config, 7, 3) != sample_channels(config, 7, 4)


def test_streams_do_not_depend_on_other_dimensions(make_config):
    # Adding a pair must not change the draws of existing (pair, subcarrier) tuples
    small = sample_channels(make_config(1, 1, 8), 11, 0)
    large = sample_channels(make_config(3, 2, 8), 11, 0)
    assert np.array_equal(small.h_hat_sr[0, 0], large.h_hat_sr[0, 0])
    assert np.array_equal(small.H_hat_rr[0], large.H_hat_rr[0])


def test_lazy_bank_matches_eager(make_config):
    config = make_config(1, 3, 6, psi_hat_rr=[0.5, 1.0, 2.0])
    eager = sample_channels(config, 5, 2)
    lazy = sample_channels(config, 5, 2, lazy_si=True)
    assert isinstance(lazy.H_hat_rr, SIChannelBank)
    assert len(lazy.H_hat_rr) == 3
    for k in range(3):
        assert np.array_equal(lazy.H_hat_rr[k], eager.H_hat_rr[k])
    assert np.array_equal(lazy.H_hat_rr[-1], eager.H_hat_rr[2])
    assert np.array_equal(lazy.H_hat_rr.materialize(), eager.H_hat_rr)
    with pytest.raises(IndexError):
        lazy.H_hat_rr[3]


def test_entry_power_matches_variance(make_config):
    N = 100_000
    channels = sample_channels(make_config(1, 1, N, psi_hat_sr=1.0, psi_hat_rr=0.0), 0, 0, lazy_si=True)
    power = np.mean(np.abs(channels.h_hat_sr[0, 0]) ** 2)
    assert 0.99 <= power <= 1.01


@pytest.mark.parametrize("link, variance", [("sr", 2.0), ("rd", 0.5)])
def test_real_and_imaginary_parts_are_gaussian(make_config, link, variance):
    N = 20_000
    config = make_config(1, 1, N, psi_hat_sr=variance, psi_hat_rd=variance, psi_hat_rr=0.0)
    channels = sample_channels(config, 9, 1, lazy_si=True)
    entries = getattr(channels, f"h_hat_{link}")[0, 0]
    scale = np.sqrt(variance / 2)
    for part in (entries.real, entries.imag):
        assert stats.kstest(part / scale, "norm").pvalue > 1e-3


def test_si_entries_are_gaussian(make_config):
    config = make_config(1, 1, 120, psi_hat_rr=3.0)
    H = sample_channels(config, 2, 0).H_hat_rr[0].ravel()
    assert np.mean(np.abs(H) ** 2) == pytest.approx(3.0, rel=0.03)
    assert stats.kstest(H.real / np.sqrt(1.5), "norm").pvalue > 1e-3


def test_trials_are_uncorrelated(make_config):
    N = 100_000
    config = make_config(1, 1, N, psi_hat_rr=0.0)
    a = sample_channels(config, 1, 0, lazy_si=True).h_hat_sr[0, 0]
    b = sample_channels(config, 1, 1, lazy_si=True).h_hat_sr[0, 0]
    rho = np.abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))
    assert rho < 0.02


def test_true_channels_without_error(make_config):
    config = make_config(2, 2, 6)
    channels = sample_channels(config, 3, 0)
    true = sample_true_channels(channels, config, 3, 0)
    assert np.array_equal(true.h_sr, channels.h_hat_sr)
    assert np.array_equal(true.h_sd, channels.h_hat_sd)
    assert np.array_equal(true.H_rr, channels.H_hat_rr)


def test_true_channel_variance_and_independence(make_config):
    N = 100_000
    config = make_config(1, 1, N, psi_hat_sr=1.0, sigma2_e_sr=0.5, psi_hat_rr=0.0)
    channels = sample_channels(config, 8, 0, lazy_si=True)
    true = sample_true_channels(channels, config, 8, 0)
    h = true.h_sr[0, 0]
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.5, rel=0.03)

    error = h - channels.h_hat_sr[0, 0]
    estimate = channels.h_hat_sr[0, 0]
    rho = np.abs(np.vdot(error, estimate)) / (np.linalg.norm(error) * np.linalg.norm(estimate))
    assert rho < 0.02


def test_lazy_true_si_matches_eager(make_config):
    config = make_config(1, 2, 5, sigma2_e_rr=0.3)
    eager = sample_true_channels(sample_channels(config, 6, 1), config, 6, 1)
    lazy = sample_true_channels(sample_channels(config, 6, 1, lazy_si=True), config, 6, 1)
    for k in range(2):
        assert np.array_equal(eager.H_rr[k], lazy.H_rr[k])


def test_counter_rng_is_keyed_by_role():
    a = counter_rng(0, 0, LinkRole.SR, 0, 0).standard_normal(4)
    b = counter_rng(0, 0, LinkRole.RD, 0, 0).standard_normal(4)
    c = counter_rng(0, 0, LinkRole.SR, 0, 0).standard_normal(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, c)
