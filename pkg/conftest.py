"""
Shared pytest fixtures for mimorelay
"""

from pathlib import Path
from typing import Any, Dict

import numpy as np
import pytest

from mimorelay.core.config import SystemConfig

ROOT = Path(__file__).parent
CONFIG_DIR = ROOT / "configs"


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run Monte Carlo acceptance tests that take minutes")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte Carlo run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


BASE_FIELDS: Dict[str, Any] = {
    "p_s": 1.0,
    "p_r": 1.0,
    "kappa_s_tilde": 0.0,
    "beta_d_tilde": 0.0,
    "kappa_r_tilde": 0.0,
    "beta_r_tilde": 0.0,
    "sigma2_n_r": 1.0,
    "sigma2_n_d": 1.0,
    "psi_hat_sr": 1.0,
    "psi_hat_rd": 1.0,
    "psi_hat_sd": 1.0,
    "psi_hat_rr": 1.0,
    "sigma2_e_sr": 0.0,
    "sigma2_e_rd": 0.0,
    "sigma2_e_sd": 0.0,
    "sigma2_e_rr": 0.0,
    "gamma0": 1.0,
}


def build_config(L: int = 1, K: int = 1, N: int = 4, **fields: Any) -> SystemConfig:
    data = dict(BASE_FIELDS, num_pairs=L, num_subcarriers=K, num_antennas=N)
    for name, value in fields.items():
        data[name] = value.tolist() if isinstance(value, np.ndarray) else value
    return SystemConfig.from_dict(data)


def random_config(rng: np.random.Generator, L: int, K: int, N: int, **fields: Any) -> SystemConfig:
    """All parameters drawn positive; distortion coefficients in [0.01, 0.2)."""
    def positive(*shape):
        return rng.uniform(0.2, 2.0, size=shape)

    data = dict(
        p_s=positive(L, K),
        p_r=positive(L, K),
        kappa_s_tilde=rng.uniform(0.01, 0.2, size=L),
        beta_d_tilde=rng.uniform(0.01, 0.2, size=L),
        kappa_r_tilde=float(rng.uniform(0.01, 0.2)),
        beta_r_tilde=float(rng.uniform(0.01, 0.2)),
        sigma2_n_r=positive(K),
        sigma2_n_d=positive(L, K),
        psi_hat_sr=positive(L, K),
        psi_hat_rd=positive(L, K),
        psi_hat_sd=positive(L, L, K),
        psi_hat_rr=positive(K),
        sigma2_e_sr=0.1 * positive(L, K),
        sigma2_e_rd=0.1 * positive(L, K),
        sigma2_e_sd=0.1 * positive(L, L, K),
        sigma2_e_rr=0.1 * positive(K),
        gamma0=float(rng.uniform(0.5, 1.0)),
    )
    data.update(fields)
    return build_config(L, K, N, **data)


@pytest.fixture
def make_config():
    return build_config


@pytest.fixture
def make_random_config():
    return random_config


@pytest.fixture
def flat_config_path() -> Path:
    return CONFIG_DIR / "flat.json"


@pytest.fixture
def impaired_config_path() -> Path:
    return CONFIG_DIR / "impaired.json"


@pytest.fixture
def ideal_config_path() -> Path:
    return CONFIG_DIR / "ideal.json"
