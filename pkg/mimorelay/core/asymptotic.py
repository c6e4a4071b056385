"""
Large-N behaviour of the relay link

``asymptotic_rate`` gives the closed-form N -> infinity SINR ceiling set by
source transmit and destination receive distortion. ``deterministic_equivalent``
replaces every random term of the finite-N decomposition by its large-N
value, which gives a finite-N approximation that tends to the same ceiling.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from dataclasses_json import dataclass_json

from .config import SystemConfig, derived_constants, relay_distortion_is_scalar
from .errors import NonScalarRelayDistortionError, ZeroPowerRatioError
from .finite_rate import (
    DOWNLINK_RELAY_PARTS,
    DOWNLINK_SOURCE_PARTS,
    UPLINK_RELAY_PARTS,
    UPLINK_SOURCE_PARTS,
    InterferenceBreakdown,
    RateReport,
    rates,
)
from .serialization import ArrayRecord, array_field

logger = logging.getLogger(__name__)

SOURCE_DISTORTION = "source-distortion"
DESTINATION_DISTORTION = "destination-distortion"
UNBOUNDED = "none"
INACTIVE = "inactive"


@dataclass_json
@dataclass(eq=False)
class AsymptoticLimits(ArrayRecord):
    """Per (pair, subcarrier) SINR and rate ceilings.

    ``binding_side[i][k]`` names the argument of the min that binds:
    ``source-distortion`` (ties included), ``destination-distortion``,
    ``none`` when both coefficients are zero and the limit is infinite, or
    ``inactive`` for a pair that carries no traffic.
    """

    sinr_limit: np.ndarray = array_field()
    rate_limit: np.ndarray = array_field()
    infinite: np.ndarray = array_field("bool")
    binding_side: List[List[str]] = field(default_factory=list)
    perfect_csi: bool = False


def _require_scalar_relay_distortion(config: SystemConfig) -> None:
    if not relay_distortion_is_scalar(config):
        raise NonScalarRelayDistortionError(
            "Asymptotic analysis requires scalar relay distortion coefficients "
            "(kappa_r_tilde and beta_r_tilde); per-chain diagonals were configured"
        )


def _is_inactive(config: SystemConfig, i: int) -> bool:
    """A pair with zero source or relay power on every subcarrier takes no part in the limit."""
    return not config.p_s[i].any() or not config.p_r[i].any()


def _check_ratios(config: SystemConfig, psi_rd: np.ndarray, i: int) -> None:
    # Limit ratios divide by these; an active pair needs them nonzero on every subcarrier
    for name, values in (('p_s', config.p_s[i]), ('p_r', config.p_r[i]), ('psi_hat_rd', psi_rd[i])):
        zero = np.flatnonzero(values == 0)
        if zero.size:
            raise ZeroPowerRatioError(i, int(zero[0]), name)


def _limits(config: SystemConfig, psi_rd: np.ndarray, perfect: bool) -> AsymptoticLimits:
    """Shared core of the imperfect- and perfect-CSI limits. ``psi_rd`` is the downlink gain used."""
    _require_scalar_relay_distortion(config)
    L, K = config.num_pairs, config.num_subcarriers

    sinr = np.zeros((L, K))
    infinite = np.zeros((L, K), dtype=bool)
    binding: List[List[str]] = []

    for i in range(L):
        if _is_inactive(config, i):
            binding.append([INACTIVE] * K)
            continue
        _check_ratios(config, psi_rd, i)

        p_s = config.p_s[i]
        weighted_r = config.p_r[i] * psi_rd[i]
        kappa = config.kappa_s_tilde[i]
        beta = config.beta_d_tilde[i]

        if kappa > 0:
            source_arg = K / (kappa * (p_s.sum() / p_s))
        else:
            source_arg = np.full(K, np.inf)
        if beta > 0:
            dest_arg = K / (beta * (weighted_r.sum() / weighted_r))
        else:
            dest_arg = np.full(K, np.inf)

        sinr[i] = np.minimum(source_arg, dest_arg)
        infinite[i] = np.isinf(sinr[i])
        row = []
        for k in range(K):
            if infinite[i, k]:
                row.append(UNBOUNDED)
            elif source_arg[k] <= dest_arg[k]:
                row.append(SOURCE_DISTORTION)
            else:
                row.append(DESTINATION_DISTORTION)
        binding.append(row)

    if infinite.any():
        logger.warning("Both distortion coefficients are zero for some pairs; their rate limit is unbounded")

    return AsymptoticLimits(
        sinr_limit=sinr,
        rate_limit=config.gamma0 * np.log2(1.0 + sinr),
        binding_side=binding,
        infinite=infinite,
        perfect_csi=perfect,
    )


def asymptotic_rate(config: SystemConfig) -> AsymptoticLimits:
    """N -> infinity limit under imperfect CSI (estimated statistics psi_hat_rd)."""
    return _limits(config, config.psi_hat_rd, perfect=False)


def asymptotic_rate_perfect_csi(config: SystemConfig) -> AsymptoticLimits:
    """Same limit with true statistics psi_rd = psi_hat_rd + sigma_e_rd^2."""
    return _limits(config, derived_constants(config).psi_rd, perfect=True)


# ---------------------------------------------------------------------------
# Deterministic equivalents
# ---------------------------------------------------------------------------

@dataclass_json
@dataclass(eq=False)
class DeterministicEquivalent(ArrayRecord):
    """Large-N approximation of every term at a given antenna count."""

    num_antennas: int
    breakdown: InterferenceBreakdown
    report: RateReport


def _own_or_other(own: np.ndarray, other: np.ndarray, L: int) -> np.ndarray:
    """[i, j, k] equal to ``own[i, k]`` on j == i and ``other[.., k]`` elsewhere."""
    eye = np.eye(L, dtype=bool)[:, :, None]
    return np.where(eye, own[:, None, :], other)


def deterministic_equivalent(config: SystemConfig,
                             num_antennas: Optional[int] = None) -> DeterministicEquivalent:
    """Evaluate the rate formulas with each random term at its large-N value."""
    _require_scalar_relay_distortion(config)
    N = float(config.num_antennas if num_antennas is None else num_antennas)
    L, K = config.num_pairs, config.num_subcarriers
    dc = derived_constants(config)
    kappa_r = float(dc.kappa_r)
    beta_r = float(dc.beta_r)

    delta_km = np.eye(K)[None, None, :, :]
    delta_ij = np.eye(L)[:, :, None, None]
    off_ij = 1.0 - delta_ij
    ones = np.ones((L, L, K, K))

    psi_sr, psi_rd, psi_rr = config.psi_hat_sr, config.psi_hat_rd, config.psi_hat_rr
    s2sr, s2rd, s2sd, s2rr = config.sigma2_e_sr, config.sigma2_e_rd, config.sigma2_e_sd, config.sigma2_e_rr

    # Uplink
    mu_s = N * psi_sr
    A = _own_or_other(N * psi_sr, np.broadcast_to(psi_sr[None, :, :], (L, L, K)), L)
    co_channel = delta_km * (off_ij * A[:, :, :, None] + s2sr[None, :, :, None])
    source_tx = dc.kappa_s[None, :, None, None] * (A + s2sr[None])[:, :, :, None] * ones
    own_fourth_moment = 1.0 + delta_ij * delta_km
    relay_rx = beta_r * (own_fourth_moment * psi_sr[None, :, None, :] + s2sr[None, :, None, :]) * ones

    relay_tx = kappa_r * (psi_rr + s2rr)[None, None, :, None] * ones
    si_estimation = delta_km * s2rr[None, None, :, None] * ones
    relay_rx_image = beta_r * (psi_rr + s2rr)[None, None, None, :] * ones
    alpha_n_r = beta_r * config.sigma2_n_r.sum() + np.broadcast_to(config.sigma2_n_r[None, :], (L, K))

    # Downlink
    mu_r = N * psi_rd
    B = _own_or_other(N * psi_rd, np.broadcast_to(psi_rd[:, None, :], (L, L, K)), L)
    co_channel_d = delta_km * (off_ij * B[:, :, :, None] + s2rd[:, None, :, None])
    relay_tx_d = kappa_r * (own_fourth_moment * psi_rd[:, None, :, None] + s2rd[:, None, :, None]) * ones
    beta_d = dc.beta_d[:, None, None, None]
    dest_rx_r = beta_d * (B + s2rd[:, None, :])[:, :, None, :] * ones

    c = config.psi_hat_sd + s2sd
    direct = delta_km * c[:, :, :, None]
    source_tx_d = dc.kappa_s[None, :, None, None] * c[:, :, :, None] * ones
    dest_rx_s = beta_d * c[:, :, None, :] * ones
    alpha_n_d = dc.beta_d[:, None] * config.sigma2_n_d.sum(axis=1, keepdims=True) + config.sigma2_n_d

    up_s = dict(zip(UPLINK_SOURCE_PARTS, (co_channel, source_tx, relay_rx)))
    up_r = dict(zip(UPLINK_RELAY_PARTS, (relay_tx, si_estimation, relay_rx_image)))
    down_s = dict(zip(DOWNLINK_SOURCE_PARTS, (direct, source_tx_d, dest_rx_s)))
    down_r = dict(zip(DOWNLINK_RELAY_PARTS, (co_channel_d, relay_tx_d, dest_rx_r)))

    breakdown = InterferenceBreakdown(
        mu_s=mu_s,
        mu_r=mu_r,
        gamma_s=sum(up_s.values()),
        gamma_r=sum(up_r.values()),
        gamma_bar_s=sum(down_s.values()),
        gamma_bar_r=sum(down_r.values()),
        alpha_n_r=np.array(alpha_n_r),
        alpha_n_d=alpha_n_d,
        gamma_s_parts=up_s,
        gamma_r_parts=up_r,
        gamma_bar_s_parts=down_s,
        gamma_bar_r_parts=down_r,
    )
    logger.debug(f"Deterministic equivalent evaluated at N={N:g}")
    return DeterministicEquivalent(
        num_antennas=int(N),
        breakdown=breakdown,
        report=rates(breakdown, config),
    )
