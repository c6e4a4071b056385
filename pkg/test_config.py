"""
Tests for system configuration parsing, validation and derived constants
"""

import json

import numpy as np
import pytest

from mimorelay.core.config import (
    config_digest,
    derived_constants,
    emit_config,
    load_config,
    parse_config,
    perfect_csi,
    relay_distortion_is_scalar,
    save_config,
    validate,
    with_antennas,
)
from mimorelay.core.errors import ConfigParseError, ConfigValidationError
from mimorelay.core.settings import LOG_LEVEL_ENV, PARALLELISM_ENV, Settings


def test_valid_config_passes(make_config):
    config = make_config(1, 1, 4, kappa_s_tilde=0.01, beta_d_tilde=0.01,
                         kappa_r_tilde=0.01, beta_r_tilde=0.01, gamma0=0.9)
    report = validate(config)
    assert report.passed
    assert report.violations == []


def test_distortion_out_of_range(make_config):
    config = make_config(1, 1, 4, kappa_s_tilde=[1.5])
    report = validate(config)
    assert not report.passed
    messages = [v.message for v in report.violations]
    assert "kappa_s_tilde[0] outside [0,1)" in messages


def test_shape_mismatch(make_config):
    config = make_config(2, 3, 4, p_s=[[1.0, 1.0], [1.0, 1.0]])
    report = validate(config)
    assert any(v.field == "p_s" and "shape mismatch" in v.message for v in report.violations)


def test_negative_and_nonfinite_values(make_config):
    config = make_config(1, 2, 4, sigma2_n_r=[-1.0, float("inf")])
    report = validate(config)
    messages = {v.message for v in report.violations}
    assert "sigma2_n_r[0] is negative" in messages
    assert "sigma2_n_r[1] is not finite" in messages


def test_gamma0_and_dimensions(make_config):
    config = make_config(1, 1, 0, gamma0=0.0)
    fields = {v.field for v in validate(config).violations}
    assert {"num_antennas", "gamma0"} <= fields


def test_per_chain_relay_distortion(make_config):
    good = make_config(1, 1, 3, kappa_r_tilde=[0.01, 0.02, 0.03])
    assert validate(good).passed
    assert not relay_distortion_is_scalar(good)

    bad = make_config(1, 1, 4, kappa_r_tilde=[0.01, 0.02, 0.03])
    assert any(v.field == "kappa_r_tilde" for v in validate(bad).violations)


def test_validation_error_message(make_config):
    report = validate(make_config(1, 1, 4, beta_d_tilde=2.0))
    error = ConfigValidationError(report)
    assert "beta_d_tilde[0] outside [0,1)" in str(error)


def test_derived_constants(make_config):
    config = make_config(1, 4, 8, kappa_s_tilde=[0.04], psi_hat_sr=1.0, sigma2_e_sr=0.1)
    dc = derived_constants(config)
    assert dc.kappa_s == pytest.approx([0.01])
    assert dc.psi_sr[0, 0] == pytest.approx(1.1)

    zero = derived_constants(make_config(1, 8, 4, kappa_r_tilde=0.0))
    assert float(zero.kappa_r) == 0.0
    assert np.all(dc.psi_sr >= config.psi_hat_sr)


def test_theta_vectors(make_config):
    dc = derived_constants(make_config(1, 2, 3, kappa_r_tilde=[0.02, 0.04, 0.06], beta_r_tilde=0.1))
    assert dc.theta_t_r(3) == pytest.approx([0.01, 0.02, 0.03])
    assert dc.theta_r_r(3) == pytest.approx([0.05, 0.05, 0.05])


def test_scalar_broadcast(make_config):
    config = make_config(2, 3, 4, psi_hat_sd=0.5)
    assert config.psi_hat_sd.shape == (2, 2, 3)
    assert np.all(config.psi_hat_sd == 0.5)
    assert config.kappa_r_tilde.ndim == 0


def test_round_trip_is_exact(make_random_config):
    config = make_random_config(np.random.default_rng(3), 2, 3, 8)
    again = parse_config(emit_config(config))
    assert again == config
    assert validate(again).passed
    assert emit_config(again) == emit_config(config)


def test_config_is_read_only(make_config):
    config = make_config(1, 1, 4)
    with pytest.raises(ValueError):
        config.p_s[0, 0] = 2.0


def test_short_field_aliases():
    config = parse_config(json.dumps({
        "L": 1, "K": 1, "N": 2, "p_s": 1, "p_r": 1, "kappa_s_tilde": 0, "beta_d_tilde": 0,
        "sigma2_n_r": 1, "sigma2_n_d": 1, "psi_hat_sr": 1, "psi_hat_rd": 1,
        "psi_hat_sd": 1, "psi_hat_rr": 1,
    }))
    assert (config.num_pairs, config.num_subcarriers, config.num_antennas) == (1, 1, 2)
    assert config.gamma0 == 1.0


def test_parse_errors():
    with pytest.raises(ConfigParseError, match="Malformed JSON"):
        parse_config("{not json")
    with pytest.raises(ConfigParseError):
        parse_config("[1, 2]")
    with pytest.raises(ConfigParseError):
        parse_config(json.dumps({"num_pairs": "two"}))
    with pytest.raises(ConfigParseError):
        parse_config(json.dumps({"num_pairs": 1, "unexpected": 1}))


def test_load_config_file(flat_config_path):
    config = load_config(flat_config_path)
    assert config.num_pairs == 2
    assert validate(config).passed


def test_digest_is_stable(make_config):
    a = make_config(1, 2, 4)
    b = make_config(1, 2, 4)
    assert config_digest(a) == config_digest(b)
    assert config_digest(a) != config_digest(with_antennas(a, 8))
    assert len(config_digest(a)) == 64


def test_perfect_csi_transform(make_config):
    config = make_config(1, 2, 4, psi_hat_rd=[[1.0, 1.0]], sigma2_e_rd=[[0.0, 1.0]])
    perfect = perfect_csi(config)
    assert perfect.psi_hat_rd.tolist() == [[1.0, 2.0]]
    assert not perfect.sigma2_e_rd.any()
    assert validate(perfect).passed


def test_settings_defaults_and_yaml(tmp_path, monkeypatch):
    monkeypatch.delenv(PARALLELISM_ENV, raising=False)
    monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)
    assert Settings.from_file(str(tmp_path / "missing.yaml")).default_trials == 200

    path = tmp_path / "settings.yaml"
    path.write_text("simulation:\n  trials: 7\n  n_values: [8, 16]\nexecution:\n  parallelism: 3\n")
    settings = Settings.from_file(str(path))
    assert settings.default_trials == 7
    assert settings.default_n_values == [8, 16]
    assert settings.parallelism == 3
    assert settings.to_dict()["simulation"]["trials"] == 7


def test_settings_environment_override(monkeypatch):
    monkeypatch.setenv(PARALLELISM_ENV, "5")
    monkeypatch.setenv(LOG_LEVEL_ENV, "debug")
    settings = Settings()
    assert settings.parallelism == 5
    assert settings.log_level == "DEBUG"

    monkeypatch.setenv(PARALLELISM_ENV, "many")
    with pytest.raises(ValueError):
        Settings()


def test_save_and_load(tmp_path, make_random_config):
    config = make_random_config(np.random.default_rng(8), 1, 2, 4)
    path = tmp_path / "system.json"
    save_config(config, path)
    assert load_config(path) == config
