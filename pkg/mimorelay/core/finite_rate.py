"""
Finite-N interference terms, covariance oracles and achievable rates

Array conventions (L pairs, K subcarriers, N relay antennas):

- per-pair quantities ``x[i, k]``;
- interference coefficients ``gamma[i, j, k, m]``: the power that pair j
  transmitting on subcarrier m leaks into pair i's receiver on subcarrier k,
  per watt of ``p[j, m]``.

The rate engine works from the coefficient decomposition. The covariance
assemblies further down are coded independently, term by term, and are only
used to cross-check it.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
from dataclasses_json import dataclass_json

from .beamform import FilterSet
from .channel import ChannelSet
from .config import SystemConfig, derived_constants
from .serialization import ArrayRecord, array_dict_field, array_field

logger = logging.getLogger(__name__)


UPLINK_SOURCE_PARTS = ('co_channel', 'source_tx_distortion', 'relay_rx_distortion')
UPLINK_RELAY_PARTS = ('relay_tx_distortion', 'si_estimation_error', 'relay_rx_distortion')
DOWNLINK_SOURCE_PARTS = ('direct_channel', 'source_tx_distortion', 'destination_rx_distortion')
DOWNLINK_RELAY_PARTS = ('co_channel', 'relay_tx_distortion', 'destination_rx_distortion')


@dataclass_json
@dataclass(eq=False)
class InterferenceBreakdown(ArrayRecord):
    """Signal gains, interference coefficients and noise floors.

    The ``*_parts`` dictionaries hold the same coefficients split by
    physical origin; each dictionary sums to its coefficient array.
    """

    mu_s: np.ndarray = array_field()
    mu_r: np.ndarray = array_field()
    gamma_s: np.ndarray = array_field()
    gamma_r: np.ndarray = array_field()
    gamma_bar_s: np.ndarray = array_field()
    gamma_bar_r: np.ndarray = array_field()
    alpha_n_r: np.ndarray = array_field()
    alpha_n_d: np.ndarray = array_field()
    gamma_s_parts: Dict[str, np.ndarray] = array_dict_field()
    gamma_r_parts: Dict[str, np.ndarray] = array_dict_field()
    gamma_bar_s_parts: Dict[str, np.ndarray] = array_dict_field()
    gamma_bar_r_parts: Dict[str, np.ndarray] = array_dict_field()


@dataclass_json
@dataclass(eq=False)
class RateReport(ArrayRecord):
    """Per (pair, subcarrier) SINRs and rates in bits/s/Hz."""

    sinr_sr: np.ndarray = array_field()
    sinr_rd: np.ndarray = array_field()
    rate_sr: np.ndarray = array_field()
    rate_rd: np.ndarray = array_field()
    rate_total: np.ndarray = array_field()
    infinite_sr: np.ndarray = array_field("bool")
    infinite_rd: np.ndarray = array_field("bool")

    @property
    def degenerate(self) -> bool:
        return bool(self.infinite_sr.any() or self.infinite_rd.any())


def _kronecker(L: int, K: int) -> Tuple[np.ndarray, np.ndarray]:
    """delta_km broadcast to [i, j, k, m] and (1 - delta_ij) likewise."""
    delta_km = np.eye(K)[None, None, :, :]
    off_ij = (1.0 - np.eye(L))[:, :, None, None]
    return delta_km, off_ij


def _si_projections(channels: ChannelSet, filters: FilterSet) -> Tuple[np.ndarray, np.ndarray]:
    """W[i, k] = (H_rr^k)^H u^{i,k} and Z[j, m] = H_rr^m v^{j,m}.

    One pass over the subcarriers, so a lazy SI bank regenerates each matrix once.
    """
    U, V = filters.u_r, filters.v_r
    W = np.empty_like(U)
    Z = np.empty_like(V)
    for k in range(channels.num_subcarriers):
        H = channels.H_hat_rr[k]
        W[:, k, :] = U[:, k, :] @ H.conj()
        Z[:, k, :] = V[:, k, :] @ H.T
    return W, Z


def _uplink_parts(channels: ChannelSet, filters: FilterSet, config: SystemConfig):
    L, K, N = config.num_pairs, config.num_subcarriers, channels.num_antennas
    dc = derived_constants(config)
    theta_t = dc.theta_t_r(N)
    theta_r = dc.theta_r_r(N)
    delta_km, off_ij = _kronecker(L, K)

    U, V, Hsr = filters.u_r, filters.v_r, channels.h_hat_sr
    s2sr = config.sigma2_e_sr
    s2rr = config.sigma2_e_rr

    # A[i, j, k] = |u^{i,k H} h_sr^{j,k}|^2
    A = np.abs(np.einsum('ikn,jkn->ijk', U.conj(), Hsr)) ** 2
    mu_s = np.einsum('iik->ik', A).copy()

    u_theta_r = np.abs(U) ** 2 * theta_r                      # |u_n|^2 theta_r[n]
    u_theta_r_sum = u_theta_r.sum(axis=-1)                     # u^H Theta_r u
    u_norm2 = (np.abs(U) ** 2).sum(axis=-1)

    co_channel = delta_km * (off_ij * A[:, :, :, None] + s2sr[None, :, :, None])
    source_tx = dc.kappa_s[None, :, None, None] * (A + s2sr[None, :, :])[:, :, :, None] * np.ones((1, 1, 1, K))
    relay_rx = (np.einsum('ikn,jmn->ijkm', u_theta_r, np.abs(Hsr) ** 2)
                + u_theta_r_sum[:, None, :, None] * s2sr[None, :, None, :])

    W, Z = _si_projections(channels, filters)
    v_theta_t = np.abs(V) ** 2 * theta_t
    v_theta_t_sum = v_theta_t.sum(axis=-1)                     # Tr(Theta_t diag(v v^H))

    relay_tx = (np.einsum('ikn,jmn->ijkm', np.abs(W) ** 2, v_theta_t)
                + s2rr[None, None, :, None] * v_theta_t_sum[None, :, None, :])
    si_estimation = delta_km * s2rr[None, None, :, None] * np.ones((L, L, 1, 1))
    relay_rx_image = (np.einsum('ikn,jmn->ijkm', u_theta_r, np.abs(Z) ** 2)
                      + u_theta_r_sum[:, None, :, None] * s2rr[None, None, None, :])

    alpha_n_r = u_theta_r_sum * config.sigma2_n_r.sum() + config.sigma2_n_r[None, :] * u_norm2

    source_parts = dict(zip(UPLINK_SOURCE_PARTS, (co_channel, source_tx, relay_rx)))
    relay_parts = dict(zip(UPLINK_RELAY_PARTS, (relay_tx, si_estimation, relay_rx_image)))
    return mu_s, source_parts, relay_parts, alpha_n_r


def _downlink_parts(channels: ChannelSet, filters: FilterSet, config: SystemConfig):
    L, K, N = config.num_pairs, config.num_subcarriers, channels.num_antennas
    dc = derived_constants(config)
    theta_t = dc.theta_t_r(N)
    delta_km, off_ij = _kronecker(L, K)

    V, Hrd = filters.v_r, channels.h_hat_rd
    s2rd = config.sigma2_e_rd
    beta_d = dc.beta_d[:, None, None, None]

    # B[i, j, k] = |h_rd^{i,k} v^{j,k}|^2 (row vector times column vector)
    B = np.abs(np.einsum('ikn,jkn->ijk', Hrd, V)) ** 2
    mu_r = np.einsum('iik->ik', B).copy()

    v_theta_t = np.abs(V) ** 2 * theta_t
    v_theta_t_sum = v_theta_t.sum(axis=-1)

    co_channel = delta_km * (off_ij * B[:, :, :, None] + s2rd[:, None, :, None])
    relay_tx = (np.einsum('ikn,jmn->ijkm', np.abs(Hrd) ** 2, v_theta_t)
                + s2rd[:, None, :, None] * v_theta_t_sum[None, :, None, :])
    dest_rx_r = beta_d * (B + s2rd[:, None, :])[:, :, None, :] * np.ones((1, 1, K, 1))

    c = np.abs(channels.h_hat_sd) ** 2 + config.sigma2_e_sd   # [i, j, k]
    direct = delta_km * c[:, :, :, None]
    source_tx = dc.kappa_s[None, :, None, None] * c[:, :, :, None] * np.ones((1, 1, 1, K))
    dest_rx_s = beta_d * c[:, :, None, :] * np.ones((1, 1, K, 1))

    alpha_n_d = dc.beta_d[:, None] * config.sigma2_n_d.sum(axis=1, keepdims=True) + config.sigma2_n_d

    source_parts = dict(zip(DOWNLINK_SOURCE_PARTS, (direct, source_tx, dest_rx_s)))
    relay_parts = dict(zip(DOWNLINK_RELAY_PARTS, (co_channel, relay_tx, dest_rx_r)))
    return mu_r, source_parts, relay_parts, alpha_n_d


def _total(parts: Dict[str, np.ndarray]) -> np.ndarray:
    return sum(parts.values())


def uplink_terms(channels: ChannelSet, filters: FilterSet,
                 config: SystemConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(mu_s, gamma_s, gamma_r, alpha_n_r) for the source-to-relay hop."""
    mu_s, source_parts, relay_parts, alpha_n_r = _uplink_parts(channels, filters, config)
    return mu_s, _total(source_parts), _total(relay_parts), alpha_n_r


def downlink_terms(channels: ChannelSet, filters: FilterSet,
                   config: SystemConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(mu_r, gamma_bar_s, gamma_bar_r, alpha_n_d) for the relay-to-destination hop."""
    mu_r, source_parts, relay_parts, alpha_n_d = _downlink_parts(channels, filters, config)
    return mu_r, _total(source_parts), _total(relay_parts), alpha_n_d


def interference_breakdown(channels: ChannelSet, filters: FilterSet,
                           config: SystemConfig) -> InterferenceBreakdown:
    """Both hops' terms, keeping the per-origin split."""
    mu_s, up_s, up_r, alpha_n_r = _uplink_parts(channels, filters, config)
    mu_r, down_s, down_r, alpha_n_d = _downlink_parts(channels, filters, config)
    return InterferenceBreakdown(
        mu_s=mu_s,
        mu_r=mu_r,
        gamma_s=_total(up_s),
        gamma_r=_total(up_r),
        gamma_bar_s=_total(down_s),
        gamma_bar_r=_total(down_r),
        alpha_n_r=alpha_n_r,
        alpha_n_d=alpha_n_d,
        gamma_s_parts=up_s,
        gamma_r_parts=up_r,
        gamma_bar_s_parts=down_s,
        gamma_bar_r_parts=down_r,
    )


# ---------------------------------------------------------------------------
# SINR and rates
# ---------------------------------------------------------------------------

def interference_power(gamma_s: np.ndarray, gamma_r: np.ndarray,
                       p_s: np.ndarray, p_r: np.ndarray) -> np.ndarray:
    """sum over (j, m) of gamma_s p_s + gamma_r p_r, shaped [i, k]."""
    return np.einsum('ijkm,jm->ik', gamma_s, p_s) + np.einsum('ijkm,jm->ik', gamma_r, p_r)


def _sinr(numerator: np.ndarray, denominator: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    infinite = (denominator == 0) & (numerator > 0)
    sinr = np.zeros_like(numerator, dtype=float)
    np.divide(numerator, denominator, out=sinr, where=denominator > 0)
    sinr[infinite] = np.inf
    return sinr, infinite


def rates(breakdown: InterferenceBreakdown, config: SystemConfig) -> RateReport:
    """SINRs, per-hop rates gamma0*log2(1+SINR) and the end-to-end minimum."""
    p_s, p_r = config.p_s, config.p_r

    den_sr = breakdown.alpha_n_r + interference_power(breakdown.gamma_s, breakdown.gamma_r, p_s, p_r)
    den_rd = breakdown.alpha_n_d + interference_power(breakdown.gamma_bar_s, breakdown.gamma_bar_r, p_s, p_r)

    sinr_sr, infinite_sr = _sinr(breakdown.mu_s * p_s, den_sr)
    sinr_rd, infinite_rd = _sinr(breakdown.mu_r * p_r, den_rd)

    for label, flags in (('uplink', infinite_sr), ('downlink', infinite_rd)):
        for i, k in np.argwhere(flags):
            logger.warning(f"Zero {label} interference-plus-noise for pair {i} subcarrier {k}; SINR reported as +inf")

    rate_sr = config.gamma0 * np.log2(1.0 + sinr_sr)
    rate_rd = config.gamma0 * np.log2(1.0 + sinr_rd)

    return RateReport(
        sinr_sr=sinr_sr,
        sinr_rd=sinr_rd,
        rate_sr=rate_sr,
        rate_rd=rate_rd,
        rate_total=np.minimum(rate_sr, rate_rd),
        infinite_sr=infinite_sr,
        infinite_rd=infinite_rd,
    )


def breakdown_summary(breakdown: InterferenceBreakdown, config: SystemConfig,
                      pair: int, subcarrier: int) -> Dict[str, Dict[str, float]]:
    """Received power per physical origin at one (pair, subcarrier), in watts."""
    i, k = pair, subcarrier
    p_s, p_r = config.p_s, config.p_r

    def power(parts: Dict[str, np.ndarray], p: np.ndarray) -> Dict[str, float]:
        return {name: float(np.sum(arr[i, :, k, :] * p)) for name, arr in parts.items()}

    def merge(*groups: Dict[str, float]) -> Dict[str, float]:
        out: Dict[str, float] = {}
        for group in groups:
            for name, value in group.items():
                out[name] = out.get(name, 0.0) + value
        return out

    uplink = {'signal': float(breakdown.mu_s[i, k] * p_s[i, k]),
              'noise': float(breakdown.alpha_n_r[i, k])}
    uplink.update(merge(power(breakdown.gamma_s_parts, p_s), power(breakdown.gamma_r_parts, p_r)))

    downlink = {'signal': float(breakdown.mu_r[i, k] * p_r[i, k]),
                'noise': float(breakdown.alpha_n_d[i, k])}
    downlink.update(merge(power(breakdown.gamma_bar_s_parts, p_s), power(breakdown.gamma_bar_r_parts, p_r)))

    return {'uplink': uplink, 'downlink': downlink}


# ---------------------------------------------------------------------------
# Covariance oracles
# ---------------------------------------------------------------------------

def covariance_relay(i: int, k: int, channels: ChannelSet, filters: FilterSet,
                     config: SystemConfig) -> np.ndarray:
    """Interference-plus-noise covariance at the relay for pair i, subcarrier k."""
    L, K, N = config.num_pairs, config.num_subcarriers, channels.num_antennas
    dc = derived_constants(config)
    Theta_t = np.diag(dc.theta_t_r(N))
    Theta_r = np.diag(dc.theta_r_r(N))
    p_s, p_r = config.p_s, config.p_r
    I = np.eye(N)
    h = channels.h_hat_sr
    v = filters.v_r

    def outer(x: np.ndarray) -> np.ndarray:
        return np.outer(x, x.conj())

    def diag_of(M: np.ndarray) -> np.ndarray:
        return np.diag(np.diag(M))

    cov = np.zeros((N, N), dtype=complex)

    # Co-channel interference and own estimation error
    for j in range(L):
        if j != i:
            cov += p_s[j, k] * outer(h[j, k])
        cov += p_s[j, k] * config.sigma2_e_sr[j, k] * I

    # Source transmit distortion on subcarrier k
    for j in range(L):
        total_power = p_s[j].sum()
        cov += dc.kappa_s[j] * total_power * (outer(h[j, k]) + config.sigma2_e_sr[j, k] * I)

    # Relay transmit signal spread: distortion covariance before the SI channel
    tx_distortion = np.zeros((N, N), dtype=complex)
    for j in range(L):
        for m in range(K):
            tx_distortion += p_r[j, m] * Theta_t @ diag_of(outer(v[j, m]))

    # SI estimation error
    own_tx_power = sum(p_r[j, k] for j in range(L))
    cov += config.sigma2_e_rr[k] * (own_tx_power + np.trace(tx_distortion).real) * I

    # Relay transmit distortion through the estimated SI channel
    H_k = channels.H_hat_rr[k]
    cov += H_k @ tx_distortion @ H_k.conj().T

    # Thermal noise
    cov += config.sigma2_n_r[k] * I

    # Relay receive distortion
    received = np.zeros((N, N), dtype=complex)
    for m in range(K):
        H_m = channels.H_hat_rr[m]
        for j in range(L):
            received += p_s[j, m] * diag_of(outer(h[j, m]))
            received += p_s[j, m] * config.sigma2_e_sr[j, m] * I
            received += p_r[j, m] * diag_of(outer(H_m @ v[j, m]))
            received += p_r[j, m] * config.sigma2_e_rr[m] * I
        received += config.sigma2_n_r[m] * I
    cov += Theta_r @ received

    return cov


def covariance_dest(i: int, k: int, channels: ChannelSet, filters: FilterSet,
                    config: SystemConfig) -> float:
    """Interference-plus-noise power at destination i on subcarrier k."""
    L, K, N = config.num_pairs, config.num_subcarriers, channels.num_antennas
    dc = derived_constants(config)
    Theta_t = np.diag(dc.theta_t_r(N))
    p_s, p_r = config.p_s, config.p_r
    h_rd = channels.h_hat_rd
    h_sd = channels.h_hat_sd
    v = filters.v_r

    def direct_gain(j: int, m: int) -> float:
        return abs(h_sd[i, j, m]) ** 2 + config.sigma2_e_sd[i, j, m]

    total = 0.0

    # Direct channel interference
    for j in range(L):
        total += p_s[j, k] * direct_gain(j, k)

    # Source transmit distortion over the direct channel
    for j in range(L):
        total += dc.kappa_s[j] * p_s[j].sum() * direct_gain(j, k)

    # Co-channel interference and estimation error
    for j in range(L):
        if j != i:
            total += p_r[j, k] * abs(h_rd[i, k] @ v[j, k]) ** 2
        total += config.sigma2_e_rd[i, k] * p_r[j, k]

    # Relay transmit distortion
    tx_distortion = np.zeros((N, N), dtype=complex)
    for j in range(L):
        for m in range(K):
            tx_distortion += p_r[j, m] * Theta_t @ np.diag(np.abs(v[j, m]) ** 2)
    row = h_rd[i, k]
    total += (row @ tx_distortion @ row.conj()).real
    total += config.sigma2_e_rd[i, k] * np.trace(tx_distortion).real

    # Thermal noise
    total += config.sigma2_n_d[i, k]

    # Destination receive distortion
    received = 0.0
    for m in range(K):
        for j in range(L):
            received += p_r[j, m] * abs(h_rd[i, m] @ v[j, m]) ** 2
            received += config.sigma2_e_rd[i, m] * p_r[j, m]
            received += p_s[j, m] * direct_gain(j, m)
        received += config.sigma2_n_d[i, m]
    total += dc.beta_d[i] * received

    return float(total)
